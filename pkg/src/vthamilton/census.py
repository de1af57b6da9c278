"""Census runs over generated vertex-transitive graphs of odd order.

Every generated graph ends up either as one record (it passed the
odd-order, connectivity and vertex-transitivity filters) or as one line of
the filtered log with the reason. Records are emitted in spec-id order and
contain no timing data, so repeated runs give byte-identical reports;
wall-clock timings go to a separate file.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .budget import BudgetExhausted, Deadline
from .cycles import hamilton_cycle
from .factorization import TWO_FACTOR_ORACLE_BOUND, oracle_uniform_odd_factor, uniform_odd_two_factor
from .generators import gen_cayley, gen_circulant, gen_kneser, group_by_name
from .graph import Graph, complement, is_connected
from .graph6 import parse_graph6, to_graph6
from .hamiltonicity import paper_procedure
from .symmetry import is_vertex_transitive

log = logging.getLogger(__name__)

FAMILIES = ("circulant", "cayley", "kneser", "complement")
DEFAULT_GROUPS = ("Z3xZ3", "Z3xZ5", "Z17", "Z19", "Z21", "Z3xZ7", "F21")


@dataclass(frozen=True)
class GraphSpec:
    family: str
    params: tuple = ()
    inner: GraphSpec | None = None

    @property
    def id(self) -> str:
        p = self.params
        if self.family == "circulant":
            return f"circulant:n={p[0]:03d}:s={','.join(map(str, p[1]))}"
        if self.family == "cayley":
            return f"cayley:{p[0]}:c={','.join(map(str, p[1]))}"
        if self.family == "kneser":
            return f"kneser:n={p[0]:03d}:k={p[1]:03d}"
        if self.family == "complement_of":
            return f"complement_of({self.inner.id})"
        if self.family == "file":
            return f"file:{p[0]}:{p[1]:05d}"
        raise ValueError(f"unknown family {self.family!r}")

    def build(self) -> Graph:
        p = self.params
        if self.family == "circulant":
            return gen_circulant(p[0], p[1])
        if self.family == "cayley":
            return gen_cayley(group_by_name(p[0]), p[1])
        if self.family == "kneser":
            return gen_kneser(p[0], p[1])
        if self.family == "complement_of":
            return complement(self.inner.build())
        if self.family == "file":
            with open(p[0]) as fh:
                line = fh.read().splitlines()[p[1]]
            return parse_graph6(line)
        raise ValueError(f"unknown family {self.family!r}")


def circulant_specs(max_n: int) -> list[GraphSpec]:
    out = []
    for n in range(3, max_n + 1, 2):
        half = list(range(1, n // 2 + 1))
        for r in range(len(half) + 1):
            for steps in itertools.combinations(half, r):
                out.append(GraphSpec("circulant", (n, steps)))
    return out


def cayley_specs(groups) -> list[GraphSpec]:
    out = []
    for name in groups:
        classes = group_by_name(name).inverse_classes()
        for r in range(len(classes) + 1):
            for chosen in itertools.combinations(classes, r):
                conn = tuple(sorted(x for cls in chosen for x in cls))
                out.append(GraphSpec("cayley", (name, conn)))
    return out


def file_specs(path) -> list[GraphSpec]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    return [GraphSpec("file", (str(path), i)) for i, line in enumerate(lines) if line.strip()]


@dataclass
class CensusConfig:
    families: tuple[str, ...] = FAMILIES
    max_n: int = 21
    circulant_max_n: int = 15
    groups: tuple[str, ...] = DEFAULT_GROUPS
    kneser: tuple[tuple[int, int], ...] = ((7, 2),)
    files: tuple[str, ...] = ()
    extra: tuple[GraphSpec, ...] = ()
    lemma_budget_ms: int = 2000
    procedure_budget_ms: int = 5000
    oracle_budget_ms: int = 10000
    jobs: int = 1

    def __post_init__(self):
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families {sorted(unknown)}; expected some of {FAMILIES}")
        if self.max_n < 1:
            raise ValueError("max_n must be positive")
        for name in ("lemma_budget_ms", "procedure_budget_ms", "oracle_budget_ms", "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def specs(self) -> list[GraphSpec]:
        base: list[GraphSpec] = []
        if "circulant" in self.families:
            base += circulant_specs(min(self.circulant_max_n, self.max_n))
        if "cayley" in self.families:
            base += cayley_specs(self.groups)
        if "kneser" in self.families:
            base += [GraphSpec("kneser", nk) for nk in self.kneser]
        if "complement" in self.families:
            base += [GraphSpec("complement_of", inner=s) for s in base]
        for path in self.files:
            base += file_specs(path)
        base += list(self.extra)
        return sorted(base, key=lambda s: s.id)


@dataclass
class CensusRecord:
    spec_id: str
    family: str
    graph6: str
    n: int
    degree: int
    connected: bool
    vertex_transitive: bool
    odd_order: bool
    complement_vertex_transitive: bool | None
    lemma_verdict: str
    lemma_cycle_length: int | None
    lemma_cycle_count: int | None
    lemma_route: str | None
    lemma_notes: list[str]
    lemma_cycles: list[list[int]] | None
    two_factor_oracle: str
    procedure_outcome: str
    procedure_levels: list[dict]
    procedure_cycle: list[int] | None
    procedure_notes: list[str]
    oracle_hamiltonicity: str
    timings_ms: dict = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> dict:
        d = asdict(self)
        if not include_timings:
            del d["timings_ms"]
        return d

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> CensusRecord:
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    @classmethod
    def from_json(cls, line: str) -> CensusRecord:
        return cls.from_dict(json.loads(line))


CSV_COLUMNS = ("spec_id", "family", "n", "degree", "lemma", "cycle_length", "cycle_count",
               "two_factor_oracle", "procedure", "levels", "quotient_flags", "oracle")


def _flag(v) -> str:
    return "?" if v is None else ("T" if v else "F")


def summary_row(r: CensusRecord) -> list:
    flags = ";".join(
        _flag(lv["quotient_connected"]) + _flag(lv["quotient_odd_order"]) + _flag(lv["quotient_vertex_transitive"])
        for lv in r.procedure_levels if lv["quotient_n"] is not None
    )
    return [r.spec_id, r.family, r.n, r.degree, r.lemma_verdict,
            "" if r.lemma_cycle_length is None else r.lemma_cycle_length,
            "" if r.lemma_cycle_count is None else r.lemma_cycle_count,
            r.two_factor_oracle, r.procedure_outcome, len(r.procedure_levels), flags, r.oracle_hamiltonicity]


def _ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def filter_reason(g: Graph, max_n: int) -> str | None:
    if g.n > max_n:
        return f"n = {g.n} exceeds max_n = {max_n}"
    if g.n % 2 == 0:
        return f"even order n = {g.n}"
    if g.n < 3:
        return f"order n = {g.n} below 3"
    if not is_connected(g):
        return "disconnected"
    if not is_vertex_transitive(g):
        return "not vertex-transitive"
    return None


def evaluate(spec_id: str, family: str, g: Graph, config: CensusConfig) -> CensusRecord:
    """Run every stage on an eligible graph."""
    timings = {}

    t0 = time.perf_counter()
    cvt = is_vertex_transitive(complement(g))
    timings["complement_ms"] = _ms(t0)

    t0 = time.perf_counter()
    cert = None
    try:
        cert = uniform_odd_two_factor(g, config.lemma_budget_ms / 1000, check_preconditions=False)
        lemma = "certificate" if cert is not None else "absent"
    except BudgetExhausted:
        lemma = "unknown"
    timings["lemma_ms"] = _ms(t0)

    t0 = time.perf_counter()
    if g.n <= TWO_FACTOR_ORACLE_BOUND:
        try:
            found = oracle_uniform_odd_factor(g, Deadline(config.oracle_budget_ms / 1000))
            tf_oracle = "present" if found is not None else "absent"
        except BudgetExhausted:
            tf_oracle = "unknown"
    else:
        tf_oracle = "skipped"
    timings["two_factor_oracle_ms"] = _ms(t0)

    t0 = time.perf_counter()
    trace = paper_procedure(g, config.procedure_budget_ms / 1000, check_preconditions=False)
    timings["procedure_ms"] = _ms(t0)
    levels = []
    for lv in trace.levels:
        c = lv.certificate
        levels.append({
            "n": lv.graph.n,
            "cycle_length": None if c is None else c.cycle_length,
            "cycle_count": None if c is None else c.cycle_count,
            "route": None if c is None else c.route,
            "quotient_n": None if lv.quotient is None else lv.quotient.n,
            "quotient_connected": lv.quotient_connected,
            "quotient_odd_order": lv.quotient_odd_order,
            "quotient_vertex_transitive": lv.quotient_vertex_transitive,
            "quotient_solver": lv.quotient_solver,
            "notes": list(lv.notes),
        })

    t0 = time.perf_counter()
    try:
        ham = hamilton_cycle(g, Deadline(config.oracle_budget_ms / 1000), bound=max(g.n, 24))
        oracle = "present" if ham is not None else "absent"
    except BudgetExhausted:
        oracle = "unknown"
    timings["oracle_ms"] = _ms(t0)

    return CensusRecord(
        spec_id=spec_id,
        family=family,
        graph6=to_graph6(g),
        n=g.n,
        degree=g.degree(0),
        connected=True,
        vertex_transitive=True,
        odd_order=True,
        complement_vertex_transitive=cvt,
        lemma_verdict=lemma,
        lemma_cycle_length=None if cert is None else cert.cycle_length,
        lemma_cycle_count=None if cert is None else cert.cycle_count,
        lemma_route=None if cert is None else cert.route,
        lemma_notes=[] if cert is None else list(cert.notes),
        lemma_cycles=None if cert is None else [list(c.vertices) for c in cert.factor.cycles],
        two_factor_oracle=tf_oracle,
        procedure_outcome=trace.outcome,
        procedure_levels=levels,
        procedure_cycle=None if trace.cycle is None else list(trace.cycle.vertices),
        procedure_notes=list(trace.notes),
        oracle_hamiltonicity=oracle,
        timings_ms=timings,
    )


def _evaluate_job(args) -> CensusRecord:
    spec_id, family, g6, config = args
    return evaluate(spec_id, family, parse_graph6(g6), config)


@dataclass
class CensusResult:
    records: list[CensusRecord]
    filtered: list[str]
    generated: int

    def jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            w.writerow(summary_row(r))
        return buf.getvalue()

    def filtered_log(self) -> str:
        return "".join(line + "\n" for line in self.filtered)

    def timings_csv(self) -> str:
        keys = ("complement_ms", "lemma_ms", "two_factor_oracle_ms", "procedure_ms", "oracle_ms")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("spec_id",) + keys)
        for r in self.records:
            w.writerow([r.spec_id] + [r.timings_ms.get(k, "") for k in keys])
        return buf.getvalue()

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "records.jsonl").write_text(self.jsonl())
        (out / "summary.csv").write_text(self.summary_csv())
        (out / "filtered.log").write_text(self.filtered_log())
        (out / "timings.csv").write_text(self.timings_csv())


def run_census(config: CensusConfig, out_dir=None) -> CensusResult:
    specs = config.specs()
    filtered: list[str] = []
    seen: dict[str, str] = {}
    jobs = []
    for spec in specs:
        sid = spec.id
        try:
            g = spec.build()
        except (ValueError, OSError, IndexError) as exc:
            filtered.append(f"{sid}\tbuild error: {exc}")
            continue
        g6 = to_graph6(g)
        if g6 in seen:
            filtered.append(f"{sid}\tduplicate of {seen[g6]}")
            continue
        seen[g6] = sid
        reason = filter_reason(g, config.max_n)
        if reason is not None:
            filtered.append(f"{sid}\t{reason}")
            continue
        jobs.append((sid, spec.family, g6, config))
    log.info("census: %d specs, %d eligible", len(specs), len(jobs))

    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            records = list(pool.map(_evaluate_job, jobs, chunksize=4))
    else:
        records = [_evaluate_job(j) for j in jobs]
    result = CensusResult(records, filtered, len(specs))
    if out_dir is not None:
        result.write(out_dir)
    return result
