"""Hamilton cycles in odd-order vertex-transitive graphs, with exact cross-checks."""

from .budget import BudgetExhausted, CapabilityError, Deadline
from .cycles import hamilton_cycle, iter_hamilton_cycles
from .factorization import (PreconditionError, TwoFactor, UniformOddCertificate, enumerate_two_factors,
                            grouped_orbit_factor, orbit_cycle_factor, orbit_dichotomy,
                            oracle_uniform_odd_factor, uniform_odd_two_factor)
from .generators import GroupTable, gen_cayley, gen_circulant, gen_kneser, group_by_name
from .graph import (Cycle, Graph, GraphError, Partition, complement, induced, is_connected, make_graph,
                    quotient_by_partition)
from .graph6 import Graph6Error, parse_graph6, to_graph6
from .hamiltonicity import (BUDGET_EXHAUSTED, FACTOR_MISSING, FOUND, LIFT_FAILED, ProcedureTrace,
                            hamilton_path_from_cycle, lift_hamilton_cycle, paper_procedure)
from .symmetry import (AutomorphismGroup, Permutation, automorphism_group, cycle_decomposition,
                       find_uniform_odd_automorphisms, group_order, is_automorphism, is_vertex_transitive,
                       stabilizer_chain)

__version__ = "0.1.0"
