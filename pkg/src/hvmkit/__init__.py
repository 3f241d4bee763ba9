"""Exact analysis of empirical models and hidden variables models."""
from .contextuality import (Classification, Contextual, GlobalJoint, NonContextual,
                            build_joint_system, classify, decide_common_cause_system,
                            decide_contextuality, synthesize_sd_hvm, synthesize_wd_hvm)
from .fileformat import ScenarioFile, load_scenario, parse_scenario, serialize_scenario
from .fixtures import load_fixture
from .hvm import (HiddenVariableModel, PropertyReport, all_properties, check_bell_locality,
                  check_outcome_independence, check_parameter_independence,
                  check_strong_determinism, check_weak_determinism, find_signaling_states,
                  induced_em, is_equivalent)
from .rational import (CapacityError, Feasible, Infeasible, LinearSystem, solve_feasibility,
                       verify_certificate)
from .scenario import EmpiricalModel, MeasurementScenario, marginal, no_signaling_witnesses, validate_em
from .spacetime import (SpacetimeEvent, boost_event, find_order_reversing_velocity,
                        interval_classify, li_audit, temporal_order)

__version__ = "0.1.0"
