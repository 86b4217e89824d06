"""Top-level algorithms: rank certification, regular-in-codimension, projective
dimension upper bounds, and their budget/checkpoint machinery."""

from __future__ import annotations

import math
import random
import sys
from dataclasses import dataclass, field as dataclass_field

from .gbasis import (
    BudgetExceededError,
    DEFAULT_S_PAIR_CAP,
    Ideal,
    RingPresentation,
    buchberger,
    dim_quotient,
    is_codim_at_least,
    is_unit_ideal,
    monomial_ideal_codim,
    normal_form,
)
from .polylinalg import (
    PolyMatrix,
    SubmatrixChoice,
    count_possible_minors,
    det_bareiss,
    determinant,
    jacobian,
    numeric_rank,
    symbolic_rank,
)
from .polyring import GF, PolyError, PolyRing
from .selection import MinorSelector, StrategyTable, builtin_strategy

CODIM_CHECK_BASE = 1.3
RANK_EVALUATION_TRIES = 3


def default_max_minors(minors_needed: int, possible_minors: int) -> float:
    """10*m + 8*log base 1.3 of the possible-minor count."""
    if possible_minors < 1:
        raise PolyError("possible minor count must be at least 1")
    return 10 * minors_needed + 8 * math.log(possible_minors) / math.log(CODIM_CHECK_BASE)


def default_min_minors(minors_needed: int) -> int:
    """2*m + 3 minors before the first codimension check."""
    return 2 * minors_needed + 3


def projdim_default_max_minors(num_vars: int, possible_minors: int) -> float:
    """5*d + 2*log base 1.3 of the possible-minor count."""
    if possible_minors < 1:
        raise PolyError("possible minor count must be at least 1")
    return 5 * num_vars + 2 * math.log(possible_minors) / math.log(CODIM_CHECK_BASE)


def checkpoint_schedule(min_minors: int, base: float = CODIM_CHECK_BASE):
    """Yield the considered-counts at which codimension checks fire.

    The first check happens once min_minors submatrices have been considered
    (at least one); after a check at count c the next one fires at the first
    count past base^k, where k is the smallest integer with base^k > c.
    """
    if base <= 1:
        raise PolyError("checkpoint base must exceed 1")
    c = max(min_minors, 1)
    while True:
        yield c
        k = max(math.ceil(math.log(c) / math.log(base)), 0)
        while base**k <= c:
            k += 1
        c = max(math.floor(base**k) + 1, c + 1)


@dataclass
class MinorLoopConfig:
    """Budgets, strategy, determinant engine and logging for the top loops."""

    max_minors: object = None  # number, or callable (minors needed, possible) -> float
    min_minors_fn: object = default_min_minors
    codim_check_base: float = CODIM_CHECK_BASE
    strategy: StrategyTable = None
    det_strategy: str = "bareiss"
    verbose: bool = False
    modulus: int = None
    jobs: int = 1
    s_pair_cap: int = DEFAULT_S_PAIR_CAP
    log_stream: object = None

    def __post_init__(self):
        if self.codim_check_base <= 1:
            raise PolyError("codim check base must exceed 1")

    def resolve_max_minors(self, minors_needed: int, possible: int, fallback=default_max_minors) -> float:
        if self.max_minors is None:
            return fallback(minors_needed, possible)
        if callable(self.max_minors):
            return float(self.max_minors(minors_needed, possible))
        return float(self.max_minors)

    def log(self, message: str):
        if self.verbose:
            print(message, file=self.log_stream or sys.stderr)


@dataclass
class LoopReport:
    """Outcome and counters of a minor-accumulation loop."""

    result: object  # True, False, or None (inconclusive)
    considered: int = 0
    computed: int = 0
    dimension: object = None
    minors: list = dataclass_field(default_factory=list)
    accumulated: Ideal = None
    dimension_history: list = dataclass_field(default_factory=list)


def _certify_rank(sub: PolyMatrix, r: int, rng) -> bool:
    """Rank certificate for an r x r candidate: random evaluations first.

    Full rank at any specialization proves symbolic rank r; after a few
    failures fall back to the exact determinant.
    """
    field = sub.ring.field
    for _ in range(RANK_EVALUATION_TRIES):
        point = [field.random_element(rng) for _ in range(sub.ring.num_vars)]
        rank, _, _ = numeric_rank((sub.evaluate(point), field))
        if rank == r:
            return True
    return not det_bareiss(sub).is_zero()


def get_submatrix_of_rank(r: int, M: PolyMatrix, cfg: MinorLoopConfig = None, rng=None):
    """Search for an r x r submatrix of rank r; None when the budget runs out."""
    if r < 1:
        raise PolyError("requested rank must be positive")
    if r > min(M.nrows, M.ncols):
        return None
    cfg = cfg or MinorLoopConfig()
    rng = rng or random.Random()
    strategy = cfg.strategy or builtin_strategy("StrategyDefaultNonRandom")
    possible = count_possible_minors(M.nrows, M.ncols, r)
    budget = cfg.resolve_max_minors(1, possible)
    selector = MinorSelector(M, strategy, rng)
    considered = 0
    while considered < budget:
        choice = selector.next_choice(r)
        considered += 1
        if _certify_rank(M.submatrix(choice), r, rng):
            return choice
    return None


def is_rank_at_least(n: int, M: PolyMatrix, cfg: MinorLoopConfig = None, rng=None) -> bool:
    """Whether rank(M) >= n; falls back to an exact rank when inconclusive."""
    if n <= 0:
        return True
    if n > min(M.nrows, M.ncols):
        return False
    if get_submatrix_of_rank(n, M, cfg, rng) is not None:
        return True
    return symbolic_rank(M) >= n


def _with_modulus(presentation: RingPresentation, p: int) -> RingPresentation:
    """Map the presentation's coefficients into F_p."""
    src = presentation.ring
    target = PolyRing(GF(p), src.variables)
    gens = [
        target.from_terms((c, m) for m, c in g.terms.items())
        for g in presentation.ideal.generators
    ]
    return RingPresentation(Ideal(gens, target))


def regular_in_codimension(n: int, presentation: RingPresentation,
                           cfg: MinorLoopConfig = None, rng=None) -> LoopReport:
    """Try to verify the quotient ring is regular in codimension n.

    Accumulates Jacobian minors of size (num_vars - dim) on top of the
    defining ideal; succeeds once the accumulated locus has dimension at most
    dim - n - 1.  Returns True on success, None when the minor budget is
    exhausted, and False only when every distinct submatrix was computed and
    the bound still fails.  The caller asserts equidimensionality.
    """
    cfg = cfg or MinorLoopConfig()
    rng = rng or random.Random()
    if cfg.modulus is not None:
        presentation = _with_modulus(presentation, cfg.modulus)
    ring = presentation.ring
    defining = presentation.ideal
    num_vars = ring.num_vars
    d = dim_quotient(defining, s_pair_cap=cfg.s_pair_cap)
    if d == -1:
        # Empty variety: vacuously regular in every codimension.
        return LoopReport(result=True, dimension=-1, accumulated=defining)
    target_dim = d - n - 1
    minor_size = num_vars - d
    gens = [g for g in defining.generators if not g.is_zero()]
    if minor_size == 0:
        # dim equals the ambient dimension, so the size-0 minor ideal is the
        # unit ideal and the singular locus is empty.
        accumulated = Ideal(defining.generators + [ring.one()], ring)
        return LoopReport(result=True, dimension=-1, accumulated=accumulated)
    if not gens:
        return LoopReport(result=None, dimension=d, accumulated=defining)
    jac = jacobian(gens)
    if minor_size > min(jac.nrows, jac.ncols):
        return LoopReport(result=None, dimension=d, accumulated=defining)

    possible = count_possible_minors(jac.nrows, jac.ncols, minor_size)
    minors_needed = n + 1
    max_minors = cfg.resolve_max_minors(minors_needed, possible)
    min_minors = cfg.min_minors_fn(minors_needed)
    cfg.log(
        f"regularInCodimension: ring dimension = {d}, possible minors = {possible}, "
        f"max minors = {max_minors:.3f}"
    )

    strategy = cfg.strategy or builtin_strategy("StrategyDefault")
    selector = MinorSelector(jac, strategy, rng, points_ideal=defining)
    schedule = checkpoint_schedule(min_minors, cfg.codim_check_base)
    next_check = next(schedule)

    seen = set()
    minors = []
    pending = []
    considered = 0
    current_gb = defining.groebner_basis(s_pair_cap=cfg.s_pair_cap)
    current_dim = d
    history = []
    # The unit ideal (codim num_vars + 1) always counts as success: dim -1
    # satisfies every bound.
    fast_codim_bound = min(num_vars - target_dim, num_vars + 1)

    def run_checkpoint():
        """Returns True on success, None if the Groebner budget ran out."""
        nonlocal current_gb, current_dim, pending
        cfg.log(
            f"regularInCodimension: checkpoint considered = {considered} computed = {len(seen)}"
        )
        try:
            reduced = [
                normal_form(m, current_gb) for m in pending
            ]
            reduced = [m for m in reduced if not m.is_zero()]
            pending = []
            probe = Ideal(current_gb + reduced, ring)
            fast = is_codim_at_least(fast_codim_bound, probe)
            if reduced:
                current_gb = buchberger(current_gb + reduced, s_pair_cap=cfg.s_pair_cap)
            heads = [g.lead_term()[0] for g in current_gb]
            codim = monomial_ideal_codim(heads, num_vars)
            current_dim = -1 if codim == num_vars + 1 else num_vars - codim
        except BudgetExceededError:
            cfg.log("regularInCodimension: fast codim bound failed, full dimension = ?")
            return None
        history.append(current_dim)
        word = "succeeded" if fast else "failed"
        cfg.log(
            f"regularInCodimension: fast codim bound {word}, full dimension = {current_dim}"
        )
        return current_dim == -1 or current_dim <= target_dim

    success = False
    while considered < max_minors and len(seen) < possible:
        choice = selector.next_choice(minor_size)
        considered += 1
        key = choice.key()
        if key not in seen:
            seen.add(key)
            det = determinant(jac.submatrix(choice), cfg.det_strategy, cfg.jobs)
            if not det.is_zero():
                minors.append(det)
                pending.append(det)
                selector.points_ideal = selector.points_ideal + [det]
        if considered >= next_check:
            while next_check <= considered:
                next_check = next(schedule)
            if run_checkpoint():
                success = True
                break

    if not success:
        outcome = run_checkpoint()
        success = bool(outcome)

    cfg.log(f"regularInCodimension: final dimension = {current_dim}")
    accumulated = Ideal(defining.generators + minors, ring)
    if success:
        result = True
    elif len(seen) >= possible:
        result = False
    else:
        result = None
    return LoopReport(
        result=result,
        considered=considered,
        computed=len(seen),
        dimension=current_dim,
        minors=minors,
        accumulated=accumulated,
        dimension_history=history,
    )


class ChainComplexInput:
    """A user-supplied complex of free modules given by its matrices d_1..d_q.

    Shapes must compose (cols of d_i = rows of d_{i+1}) and consecutive maps
    must compose to zero; both are validated on construction.
    """

    def __init__(self, maps):
        self.maps = list(maps)
        if not self.maps:
            raise PolyError("complex needs at least one map")
        self.ring = self.maps[0].ring
        for i, d in enumerate(self.maps):
            if d.ring != self.ring:
                raise PolyError("complex maps over different rings")
            if i + 1 < len(self.maps):
                nxt = self.maps[i + 1]
                if d.ncols != nxt.nrows:
                    raise PolyError(
                        f"shape mismatch: d{i+1} has {d.ncols} columns but "
                        f"d{i+2} has {nxt.nrows} rows"
                    )
                prod = d * nxt
                if any(not e.is_zero() for row in prod.entries for e in row):
                    raise PolyError(f"d{i+1} * d{i+2} is not zero")

    @property
    def length(self) -> int:
        return len(self.maps)


def proj_dim_upper_bound(complex_input: ChainComplexInput, min_dimension: int = 0,
                         cfg: MinorLoopConfig = None, rng=None) -> int:
    """Upper bound on projective dimension by trimming split tail maps.

    The tail map d_q splits exactly when its (rank F_q)-minors generate the
    unit ideal; each certified split lowers the bound by one and shrinks the
    expected rank of the next map.  Stops at min_dimension unconditionally.
    """
    if min_dimension < 0:
        raise PolyError("min dimension must be nonnegative")
    cfg = cfg or MinorLoopConfig()
    rng = rng or random.Random()
    strategy = cfg.strategy or builtin_strategy("StrategyDefault")
    maps = complex_input.maps
    bound = len(maps)
    expected_rank = maps[-1].ncols
    j = len(maps)
    while bound > min_dimension and j >= 1:
        d = maps[j - 1]
        if expected_rank == 0:
            # Nothing left to split off; the zero-rank minors are the unit ideal.
            bound -= 1
            j -= 1
            expected_rank = maps[j - 1].ncols if j >= 1 else 0
            continue
        if expected_rank > min(d.nrows, d.ncols):
            break
        possible = count_possible_minors(d.nrows, d.ncols, expected_rank)
        budget = cfg.resolve_max_minors(
            complex_input.ring.num_vars, possible, fallback=projdim_default_max_minors
        )
        selector = MinorSelector(d, strategy, rng)
        seen = set()
        minors = []
        considered = 0
        unit = False
        while considered < budget and len(seen) < possible:
            choice = selector.next_choice(expected_rank)
            considered += 1
            key = choice.key()
            if key in seen:
                continue
            seen.add(key)
            det = determinant(d.submatrix(choice), cfg.det_strategy, cfg.jobs)
            if det.is_zero():
                continue
            minors.append(det)
            if det.is_constant():
                unit = True
                break
        if not unit and minors:
            try:
                unit = is_unit_ideal(Ideal(minors, d.ring), s_pair_cap=cfg.s_pair_cap)
            except BudgetExceededError:
                unit = False
        if not unit:
            break
        bound -= 1
        j -= 1
        if j >= 1:
            expected_rank = maps[j - 1].ncols - expected_rank
            if expected_rank < 0:
                break
    return bound
