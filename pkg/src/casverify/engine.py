"""Choice-tape nondeterminism engine.

A proof body is an ordinary callable taking a `RunContext`.  Every
nondeterministic value it needs is drawn through `RunContext.choice` from a
finite `Domain`, which makes each run a deterministic function of the
sequence of chosen indices: the choice tape.  A counterexample is a tape.

Two backends explore the tape space:

* exhaustive: depth-first enumeration with first-value default.  The proof
  body is cheap to restart, so backtracking re-runs it from scratch with a
  forced index prefix instead of capturing continuations.  Counterexamples
  are minimal in lexicographic tape order.
* random: independent seeded runs with boundary-biased draws; an `assume`
  failure aborts and rejects the run.  A random pass is explicitly weaker
  than an exhaustive pass and the report flags it.

There is no constraint solving: the exhaustive backend substitutes
small-scope enumeration, stated honestly in reports.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .heap import Fault, Heap, HeapConfig, MemoryFaultError, Pointer, UsageError

EXHAUSTIVE = "exhaustive"
RANDOM = "random"

U64_MAX = (1 << 64) - 1

# Domain kinds as they appear in serialized tapes.
KIND_BOOL = "bool"
KIND_U8 = "u8"
KIND_U64 = "u64"
KIND_SIZET = "sizet"
KIND_WILD = "wildtoken"
KIND_CUSTOM = "custom"


@dataclass(frozen=True)
class Domain:
    """Finite ordered candidate set for one nondeterministic draw."""

    kind: str
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("domain must be non-empty")
        if len(set(self.values)) != len(self.values):
            raise ValueError("domain values must be duplicate-free")

    @staticmethod
    def bools() -> "Domain":
        return Domain(KIND_BOOL, (False, True))

    @staticmethod
    def size_t(bound: int) -> "Domain":
        return Domain(KIND_SIZET, tuple(range(bound + 1)))

    @staticmethod
    def u8(values: Iterable[int]) -> "Domain":
        return Domain(KIND_U8, tuple(values))

    @staticmethod
    def u64(values: Iterable[int]) -> "Domain":
        return Domain(KIND_U64, tuple(values))

    @staticmethod
    def wild_token() -> "Domain":
        # Single candidate: the draw marks creation of a fresh opaque token
        # on the tape without multiplying paths.
        return Domain(KIND_WILD, (0,))

    @staticmethod
    def custom(values: Iterable) -> "Domain":
        return Domain(KIND_CUSTOM, tuple(values))


@dataclass(frozen=True)
class TapeEntry:
    kind: str
    index: int


@dataclass(frozen=True)
class ChoiceTape:
    """Recorded sequence of draws; replaying it against the same proof and
    config reproduces the identical heap trace and verdict."""

    entries: tuple[TapeEntry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_text(self) -> str:
        return "".join(f"{e.kind}:{e.index}\n" for e in self.entries)

    @staticmethod
    def from_text(text: str) -> "ChoiceTape":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            kind, sep, idx = line.partition(":")
            if not sep or not idx.strip().isdigit():
                raise ValueError(f"malformed tape line {lineno}: {line!r}")
            entries.append(TapeEntry(kind.strip(), int(idx)))
        return ChoiceTape(tuple(entries))


@dataclass(frozen=True)
class AssertionSite:
    """Stable identifier for one assert statement.  Sites sharing a
    group_key are semantic duplicates (the same helper asserted from several
    call sites); vacuity warns only when a whole group is unreached."""

    site_id: str
    group_key: str = ""
    description: str = ""

    def __post_init__(self):
        if not self.group_key:
            object.__setattr__(self, "group_key", self.site_id)


@dataclass(frozen=True)
class ExploreConfig:
    backend: str = EXHAUSTIVE
    size_bound: int = 4
    byte_domain: tuple[int, ...] = (0x00, 0x01, 0xFF)
    u64_values: tuple[int, ...] | None = None
    max_paths: int = 100_000
    max_choices_per_path: int = 64
    random_budget: int = 10_000
    seed: int = 0
    malloc_can_fail: bool = True
    warn_dead_assume: bool = False
    heap: HeapConfig = field(default_factory=HeapConfig)

    def __post_init__(self):
        for name in ("size_bound", "max_paths", "max_choices_per_path",
                     "random_budget"):
            if getattr(self, name) <= 0 and name != "size_bound":
                raise ValueError(f"{name} must be positive")
        if self.size_bound < 0:
            raise ValueError("size_bound must be non-negative")
        if not self.byte_domain:
            raise ValueError("byte_domain must be non-empty")

    def u64_domain_values(self) -> tuple[int, ...]:
        if self.u64_values is not None:
            return self.u64_values
        return tuple(sorted({0, 1, 2, self.size_bound, (1 << 32) - 1, U64_MAX}))

    def with_overrides(self, **kw) -> "ExploreConfig":
        heap_kw = {k: kw.pop(k) for k in list(kw)
                   if k in HeapConfig.__dataclass_fields__}
        cfg = replace(self, **kw)
        if heap_kw:
            cfg = replace(cfg, heap=replace(cfg.heap, **heap_kw))
        return cfg


VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_BUDGET = "budget_exhausted"


@dataclass(frozen=True)
class Verdict:
    status: str
    tape: ChoiceTape | None = None
    fault: Fault | None = None
    failed_site: str | None = None
    message: str = ""

    @property
    def is_pass(self) -> bool:
        return self.status == VERDICT_PASS

    @property
    def is_fail(self) -> bool:
        return self.status == VERDICT_FAIL


@dataclass
class RunReport:
    """Outcome of exploring one proof plus exploration statistics.
    Immutable by convention once produced; wall_time is the only field not
    determined by (proof, config, seed)."""

    name: str
    backend: str
    verdict: Verdict
    paths_explored: int = 0
    paths_pruned_by_assume: int = 0
    paths_truncated: int = 0
    runs_completed: int = 0
    runs_rejected: int = 0
    max_choice_depth: int = 0
    assertion_hits: dict = field(default_factory=dict)
    complete: bool = False
    dead_assume_warning: bool = False
    wall_time: float = 0.0


class PathPruned(Exception):
    pass


class AssertionFailed(Exception):
    def __init__(self, site_id: str, message: str = ""):
        super().__init__(message or f"assertion {site_id} failed")
        self.site_id = site_id


class ChoiceBudgetExceeded(Exception):
    pass


class ReplayMismatchError(Exception):
    """Tape and proof disagree: different domain kind, index out of range,
    or the proof drew past the end of the tape."""


class RunContext:
    """Per-run state handed to a proof body.

    Exposes the heap, the draw/assume/assert primitives, and the per-helper
    fixed/buggy variant selection.  One context lives for exactly one path.
    """

    def __init__(self, cfg: ExploreConfig, *, buggy: frozenset[str] = frozenset(),
                 forced: list[int] | None = None, tape: ChoiceTape | None = None,
                 rng: random.Random | None = None, trace: list | None = None):
        self.cfg = cfg
        self._buggy = buggy
        self._forced = forced
        self._replay = tape
        self._rng = rng
        self._trace = trace
        self.taken: list[TapeEntry] = []
        self.sizes: list[int] = []
        self.hits: dict[str, int] = {}
        self.sites: dict[str, AssertionSite] = {}
        self._wild_count = 0
        self._byte_dom = Domain.u8(cfg.byte_domain)
        self.heap = Heap(cfg.heap, byte_source=self._draw_byte)

    # -- draws --------------------------------------------------------------

    def _draw_byte(self) -> int:
        return self.choice(self._byte_dom)

    def choice(self, domain: Domain):
        if len(self.taken) >= self.cfg.max_choices_per_path:
            raise ChoiceBudgetExceeded()
        pos = len(self.taken)
        n = len(domain.values)
        if self._replay is not None:
            if pos >= len(self._replay.entries):
                raise ReplayMismatchError(
                    f"proof drew choice #{pos + 1} but tape has only "
                    f"{len(self._replay.entries)} entries")
            entry = self._replay.entries[pos]
            if entry.kind != domain.kind:
                raise ReplayMismatchError(
                    f"tape entry #{pos + 1} is {entry.kind}, proof drew {domain.kind}")
            if not 0 <= entry.index < n:
                raise ReplayMismatchError(
                    f"tape entry #{pos + 1} index {entry.index} outside "
                    f"{domain.kind} domain of {n} values")
            idx = entry.index
        elif self._forced is not None and pos < len(self._forced):
            idx = self._forced[pos]
        elif self._rng is not None:
            # Boundary bias: a quarter of draws snap to a domain endpoint.
            if n > 1 and self._rng.random() < 0.25:
                idx = 0 if self._rng.random() < 0.5 else n - 1
            else:
                idx = self._rng.randrange(n)
        else:
            idx = 0
        self.taken.append(TapeEntry(domain.kind, idx))
        self.sizes.append(n)
        value = domain.values[idx]
        if self._trace is not None:
            self._trace.append(
                f"choice {len(self.taken)}: {domain.kind}[{n}] -> index {idx} ({value!r})")
        return value

    def fresh_wild(self) -> Pointer:
        self._wild_count += 1
        return Pointer.wild(f"nd:{self._wild_count}")

    # -- control ------------------------------------------------------------

    def assume(self, cond) -> None:
        if not cond:
            if self._trace is not None:
                self._trace.append("assume: false -> path pruned")
            raise PathPruned()
        if self._trace is not None:
            self._trace.append("assume: ok")

    def sassert(self, site, cond) -> None:
        if isinstance(site, str):
            site = AssertionSite(site)
        self.sites.setdefault(site.site_id, site)
        self.hits[site.site_id] = self.hits.get(site.site_id, 0) + 1
        if not cond:
            if self._trace is not None:
                self._trace.append(f"assert {site.site_id}: FAILED")
            raise AssertionFailed(site.site_id)
        if self._trace is not None:
            self._trace.append(f"assert {site.site_id}: ok")

    # -- variants -----------------------------------------------------------

    def is_buggy(self, helper_name: str) -> bool:
        return helper_name in self._buggy


@dataclass
class _PathOutcome:
    status: str  # ok | prune | fail | choices_exhausted
    taken: list[TapeEntry]
    sizes: list[int]
    hits: dict
    sites: dict
    fault: Fault | None = None
    failed_site: str | None = None
    message: str = ""


def _run_once(proof: Callable, cfg: ExploreConfig, *, buggy=frozenset(),
              forced=None, tape=None, rng=None, trace=None) -> _PathOutcome:
    ctx = RunContext(cfg, buggy=buggy, forced=forced, tape=tape, rng=rng, trace=trace)
    try:
        proof(ctx)
        status = "ok"
        out = _PathOutcome(status, ctx.taken, ctx.sizes, ctx.hits, ctx.sites)
    except PathPruned:
        out = _PathOutcome("prune", ctx.taken, ctx.sizes, ctx.hits, ctx.sites)
    except ChoiceBudgetExceeded:
        out = _PathOutcome("choices_exhausted", ctx.taken, ctx.sizes, ctx.hits, ctx.sites)
    except AssertionFailed as e:
        out = _PathOutcome("fail", ctx.taken, ctx.sizes, ctx.hits, ctx.sites,
                           failed_site=e.site_id, message=str(e))
    except MemoryFaultError as e:
        if trace is not None:
            trace.append(f"heap fault: {e.fault.kind.value} at {e.fault.location}: "
                         f"{e.fault.detail}")
        out = _PathOutcome("fail", ctx.taken, ctx.sizes, ctx.hits, ctx.sites,
                           fault=e.fault, message=str(e))
    except UsageError as e:
        out = _PathOutcome("fail", ctx.taken, ctx.sizes, ctx.hits, ctx.sites,
                           message=f"framework usage error: {e}")
    return out


def _merge_hits(total: dict, sites: dict, out: _PathOutcome):
    for sid, n in out.hits.items():
        total[sid] = total.get(sid, 0) + n
    sites.update(out.sites)


def explore(proof: Callable, cfg: ExploreConfig, *, name: str = "",
            sites: Iterable[AssertionSite] = (),
            buggy: frozenset[str] = frozenset()) -> RunReport:
    """Explore a proof under the configured backend and return the report.

    `sites` declares the proof's assertion sites up front so that a site
    sitting in never-executed code still shows up (with zero hits) for
    vacuity analysis.
    """
    t0 = time.perf_counter()
    if cfg.backend == RANDOM:
        report = _explore_random(proof, cfg, name, sites, buggy)
    elif cfg.backend == EXHAUSTIVE:
        report = _explore_exhaustive(proof, cfg, name, sites, buggy)
    else:
        raise ValueError(f"unknown backend {cfg.backend!r}")
    report.wall_time = time.perf_counter() - t0
    return report


def _fail_verdict(out: _PathOutcome) -> Verdict:
    return Verdict(VERDICT_FAIL, tape=ChoiceTape(tuple(out.taken)),
                   fault=out.fault, failed_site=out.failed_site, message=out.message)


def _explore_exhaustive(proof, cfg, name, declared, buggy) -> RunReport:
    hits = {s.site_id: 0 for s in declared}
    site_reg = {s.site_id: s for s in declared}
    explored = pruned = truncated = depth = 0
    prefix: list[int] = []
    while True:
        if explored + pruned + truncated >= cfg.max_paths:
            return RunReport(name, EXHAUSTIVE,
                             Verdict(VERDICT_BUDGET, message="max_paths exhausted"),
                             paths_explored=explored, paths_pruned_by_assume=pruned,
                             paths_truncated=truncated, max_choice_depth=depth,
                             assertion_hits=hits, complete=False)
        out = _run_once(proof, cfg, buggy=buggy, forced=prefix)
        depth = max(depth, len(out.taken))
        if out.status == "fail":
            _merge_hits(hits, site_reg, out)
            return RunReport(name, EXHAUSTIVE, _fail_verdict(out),
                             paths_explored=explored, paths_pruned_by_assume=pruned,
                             paths_truncated=truncated, max_choice_depth=depth,
                             assertion_hits=hits, complete=True)
        if out.status == "prune":
            pruned += 1  # pruned paths contribute no verdict and no hits
        elif out.status == "choices_exhausted":
            truncated += 1
            _merge_hits(hits, site_reg, out)
        else:
            explored += 1
            _merge_hits(hits, site_reg, out)
        # Advance to the next tape in lexicographic DFS order.
        i = len(out.taken) - 1
        while i >= 0 and out.taken[i].index + 1 >= out.sizes[i]:
            i -= 1
        if i < 0:
            break
        prefix = [e.index for e in out.taken[:i]] + [out.taken[i].index + 1]
    complete = truncated == 0
    status = VERDICT_PASS if complete else VERDICT_BUDGET
    message = "" if complete else "some paths hit max_choices_per_path"
    dead = (cfg.warn_dead_assume and complete and explored == 0 and pruned > 0)
    return RunReport(name, EXHAUSTIVE, Verdict(status, message=message),
                     paths_explored=explored, paths_pruned_by_assume=pruned,
                     paths_truncated=truncated, max_choice_depth=depth,
                     assertion_hits=hits, complete=complete, dead_assume_warning=dead)


def _explore_random(proof, cfg, name, declared, buggy) -> RunReport:
    hits = {s.site_id: 0 for s in declared}
    site_reg = {s.site_id: s for s in declared}
    rng = random.Random(cfg.seed)
    completed = rejected = truncated = depth = 0
    for _ in range(cfg.random_budget):
        out = _run_once(proof, cfg, buggy=buggy, rng=rng)
        depth = max(depth, len(out.taken))
        if out.status == "fail":
            _merge_hits(hits, site_reg, out)
            return RunReport(name, RANDOM, _fail_verdict(out),
                             paths_explored=completed, runs_completed=completed,
                             runs_rejected=rejected,
                             paths_pruned_by_assume=rejected,
                             paths_truncated=truncated,
                             max_choice_depth=depth, assertion_hits=hits,
                             complete=True)
        if out.status == "prune":
            rejected += 1
        elif out.status == "choices_exhausted":
            truncated += 1
        else:
            completed += 1
            _merge_hits(hits, site_reg, out)
    if completed == 0:
        verdict = Verdict(VERDICT_BUDGET,
                          message=f"all {cfg.random_budget} runs rejected or truncated")
    else:
        verdict = Verdict(VERDICT_PASS,
                          message="random pass: no failing run found within budget "
                                  "(weaker than exhaustive)")
    return RunReport(name, RANDOM, verdict, paths_explored=completed,
                     runs_completed=completed, runs_rejected=rejected,
                     paths_pruned_by_assume=rejected,
                     paths_truncated=truncated, max_choice_depth=depth,
                     assertion_hits=hits, complete=False)


def replay(proof: Callable, tape: ChoiceTape, cfg: ExploreConfig, *, name: str = "",
           sites: Iterable[AssertionSite] = (), buggy: frozenset[str] = frozenset(),
           trace: list | None = None) -> RunReport:
    """Deterministically re-run one recorded path.

    Raises ReplayMismatchError when the proof draws a different domain than
    recorded or runs past the end of the tape.  A tape may legally go
    unconsumed (e.g. replaying a buggy counterexample against the fixed
    variant)."""
    t0 = time.perf_counter()
    hits = {s.site_id: 0 for s in sites}
    site_reg = {s.site_id: s for s in sites}
    out = _run_once(proof, cfg, buggy=buggy, tape=tape, trace=trace)
    if out.status == "fail":
        verdict = _fail_verdict(out)
    elif out.status == "choices_exhausted":
        verdict = Verdict(VERDICT_BUDGET, message="max_choices_per_path hit during replay")
    elif out.status == "prune":
        verdict = Verdict(VERDICT_PASS, message="replayed path pruned by assume")
    else:
        verdict = Verdict(VERDICT_PASS)
    _merge_hits(hits, site_reg, out)
    return RunReport(name, "replay", verdict, paths_explored=1,
                     paths_pruned_by_assume=1 if out.status == "prune" else 0,
                     max_choice_depth=len(out.taken), assertion_hits=hits,
                     complete=True, wall_time=time.perf_counter() - t0)


def standalone_context(cfg: ExploreConfig | None = None, *,
                       buggy: frozenset[str] = frozenset()) -> RunContext:
    """Context for direct-style use outside an exploration (tests, scripts).
    Draws take the first domain value, so behavior is deterministic."""
    return RunContext(cfg or ExploreConfig(), buggy=buggy)
