"""Verification library: the primitives unit proofs are written against.

Nondet constructors (`nd_*`), memory helpers (`memhavoc`,
`can_fail_malloc`), the assume/assert entry points wired to the engine and
the vacuity registry, and helpers that exist in both fixed and buggy
variants for the seeded-bug corpus.

Variant selection is run configuration, not separate code copies: a helper
reads its own fixed/buggy flag from the run context unless the caller
passes one explicitly, which keeps fixed/buggy pairs structurally aligned.
"""

from __future__ import annotations

from enum import Enum

from .engine import AssertionSite, Domain, RunContext
from .heap import NULL_PTR, Pointer


class VariantFlag(Enum):
    FIXED = "fixed"
    BUGGY = "buggy"


FIXED = VariantFlag.FIXED
BUGGY = VariantFlag.BUGGY


def resolve_variant(ctx: RunContext, helper_name: str,
                    variant: VariantFlag | None) -> VariantFlag:
    if variant is not None:
        return variant
    return BUGGY if ctx.is_buggy(helper_name) else FIXED


# -- nondet constructors ----------------------------------------------------

def nd_size_t(ctx: RunContext) -> int:
    """Arbitrary size value within the engine's small-scope bound."""
    return ctx.choice(Domain.size_t(ctx.cfg.size_bound))


def nd_u64(ctx: RunContext) -> int:
    """Arbitrary 64-bit value drawn from the configured boundary set."""
    return ctx.choice(Domain.u64(ctx.cfg.u64_domain_values()))


def nd_u8(ctx: RunContext) -> int:
    return ctx.choice(Domain.u8(ctx.cfg.byte_domain))


def nd_bool(ctx: RunContext) -> bool:
    return ctx.choice(Domain.bools())


def nd_voidp(ctx: RunContext) -> Pointer:
    """Potentially invalid pointer: one branch null, one branch a fresh wild
    pointer.  Never a pointer into an existing allocation, so touching it is
    always a detectable fault."""
    if ctx.choice(Domain.bools()):
        ctx.choice(Domain.wild_token())
        return ctx.fresh_wild()
    return NULL_PTR


# -- assume / assert ---------------------------------------------------------

def assume(ctx: RunContext, cond) -> None:
    ctx.assume(cond)


def sassert(ctx: RunContext, site, cond) -> None:
    ctx.sassert(site, cond)


# -- memory helpers -----------------------------------------------------------

def memhavoc(ctx: RunContext, p: Pointer, length: int) -> None:
    """Fill a memory region with nondeterministic bytes."""
    ctx.heap.havoc(p, length, loc="memhavoc")


def can_fail_malloc(ctx: RunContext, size: int) -> Pointer:
    """Allocation that (when configured) nondeterministically fails.

    The success branch havocs the region, so reading freshly allocated
    memory is well-defined and never an uninitialized read."""
    if ctx.cfg.malloc_can_fail and ctx.choice(Domain.bools()):
        return NULL_PTR
    p = ctx.heap.alloc(size)
    if not p.is_null:
        ctx.heap.havoc(p, size, loc="can_fail_malloc")
    return p


# -- byte comparison helper (fixed and buggy) ---------------------------------

def bytes_match_sites(label: str = "assert_bytes_match") -> tuple[AssertionSite, AssertionSite]:
    """Assertion sites registered by assert_bytes_match under `label`.
    Distinct call sites get distinct site ids but share group keys, which is
    what lets vacuity treat them as duplicates."""
    return (
        AssertionSite(f"{label}:null_eq", group_key="assert_bytes_match:null_eq",
                      description="regions agree on being null"),
        AssertionSite(f"{label}:byte_eq", group_key="assert_bytes_match:byte_eq",
                      description="bytes agree at a nondet index"),
    )


def assert_bytes_match(ctx: RunContext, a: Pointer, b: Pointer, length: int,
                       variant: VariantFlag | None = None,
                       label: str = "assert_bytes_match") -> None:
    """Assert two byte regions are equivalent.

    The content check draws a single nondet index instead of looping, which
    keeps the helper O(1) and exercises assume-pruning.  The buggy variant
    drops the zero-length escape and wrongly requires an empty string and an
    empty (null) buffer to agree on nullness."""
    v = resolve_variant(ctx, "assert_bytes_match", variant)
    null_site, byte_site = bytes_match_sites(label)
    null_eq = a.is_null == b.is_null
    if v is FIXED:
        ctx.sassert(null_site, length == 0 or null_eq)
    else:
        ctx.sassert(null_site, null_eq)
    if length > 0 and not a.is_null and not b.is_null:
        i = nd_size_t(ctx)
        ctx.assume(i < length)
        ctx.sassert(byte_site,
                    ctx.heap.read(a.add(i), 1) == ctx.heap.read(b.add(i), 1))


# -- fuzz-friendly bounding ----------------------------------------------------

def coerce_bound(x: int, bound: int) -> int:
    """Clamp a drawn value into [0, bound] by modulo instead of assume, so a
    random backend never has to reject the run."""
    if bound <= 0:
        return 0
    return x % (bound + 1)
