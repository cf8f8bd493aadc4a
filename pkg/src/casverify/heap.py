"""Modeled heap with memory-safety semantics.

Every proof runs against a `Heap`: an allocation-id indexed store with
per-byte initialization state, per-byte write epochs, and optional per-byte
effective-type tags.  Pointers are tagged values (null / valid / wild)
rather than flat addresses, which gives exact bounds, use-after-free and
wild-dereference detection without address arithmetic ambiguity.

Invalid accesses raise `MemoryFaultError` and latch the heap: once a fault
occurred, every subsequent heap operation re-raises the same fault and
mutates nothing.

Content written by `havoc` is nondeterministic and materialized lazily: a
havocked byte draws its concrete value from `byte_source` only when first
read, so path counts stay proportional to the bytes a proof inspects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable


class PtrKind(Enum):
    NULL = "null"
    VALID = "valid"
    WILD = "wild"


@dataclass(frozen=True)
class Pointer:
    """Tagged pointer value.

    A valid pointer may carry an out-of-bounds offset; existence is legal,
    dereference is not.  Wild pointers are never dereferenceable and compare
    equal iff their tokens are equal.
    """

    kind: PtrKind
    alloc_id: int = 0
    offset: int = 0
    token: str = ""

    @staticmethod
    def null() -> "Pointer":
        return NULL_PTR

    @staticmethod
    def valid(alloc_id: int, offset: int = 0) -> "Pointer":
        return Pointer(PtrKind.VALID, alloc_id=alloc_id, offset=offset)

    @staticmethod
    def wild(token: str) -> "Pointer":
        return Pointer(PtrKind.WILD, token=token)

    @property
    def is_null(self) -> bool:
        return self.kind is PtrKind.NULL

    @property
    def is_wild(self) -> bool:
        return self.kind is PtrKind.WILD

    def add(self, delta: int) -> "Pointer":
        """Pointer arithmetic.  Garbage stays garbage: shifting a null or
        wild pointer yields a never-dereferenceable value instead of failing,
        so that faults surface at the access, like they would in compiled
        code."""
        if self.kind is PtrKind.VALID:
            return Pointer(PtrKind.VALID, alloc_id=self.alloc_id, offset=self.offset + delta)
        if self.kind is PtrKind.NULL:
            return self if delta == 0 else Pointer.wild(f"null+{delta}")
        return self

    def __repr__(self) -> str:
        if self.kind is PtrKind.NULL:
            return "null"
        if self.kind is PtrKind.VALID:
            return f"&a{self.alloc_id}+{self.offset}"
        return f"wild({self.token})"


NULL_PTR = Pointer(PtrKind.NULL)


class FaultKind(Enum):
    NULL_DEREF = "NullDeref"
    WILD_DEREF = "WildDeref"
    OUT_OF_BOUNDS = "OutOfBounds"
    USE_AFTER_FREE = "UseAfterFree"
    UNINIT_READ = "UninitRead"
    TYPED_ACCESS_VIOLATION = "TypedAccessViolation"
    ZERO_SIZE_ACCESS = "ZeroSizeAccess"


@dataclass(frozen=True)
class Fault:
    kind: FaultKind
    location: str
    detail: str


class MemoryFaultError(Exception):
    """Raised on an invalid memory access; carries the latched fault."""

    def __init__(self, fault: Fault):
        super().__init__(f"{fault.kind.value} at {fault.location}: {fault.detail}")
        self.fault = fault


class UsageError(Exception):
    """Framework misuse (e.g. is_mod before tracking_on), distinct from a
    memory fault found in the code under proof."""


@dataclass(frozen=True)
class HeapConfig:
    typed_access_check: bool = False
    uninit_read_is_fault: bool = True
    zero_alloc_returns_null: bool = True
    # Gates the ZeroSizeAccess fault kind: off by default, zero-length
    # accesses are no-ops even through invalid pointers.
    zero_size_access_is_fault: bool = False


# Byte initialization states.
_UNINIT, _INIT, _HAVOC = 0, 1, 2

# Effective-type tags (recorded per byte, checked only when enabled).
TAG_NONE, TAG_U8, TAG_U64, TAG_PTR = 0, 1, 2, 3


@dataclass
class Allocation:
    id: int
    size: int
    freed: bool = False
    data: bytearray = field(default_factory=bytearray)
    state: bytearray = field(default_factory=bytearray)
    epochs: list = field(default_factory=list)
    tags: bytearray = field(default_factory=bytearray)

    def __post_init__(self):
        if not self.data:
            self.data = bytearray(self.size)
            self.state = bytearray(self.size)  # all _UNINIT
            self.epochs = [0] * self.size
            self.tags = bytearray(self.size)  # all TAG_NONE


class Heap:
    """Single-proof-run heap.  Not safe for concurrent mutation; a run owns
    its heap wholesale."""

    def __init__(self, config: HeapConfig | None = None,
                 byte_source: Callable[[], int] | None = None):
        self.config = config or HeapConfig()
        self.byte_source = byte_source
        self.allocations: dict[int, Allocation] = {}
        self.global_epoch = 0
        self.tracking_epoch: int | None = None
        self.fault: Fault | None = None
        self._next_id = 1
        self._ptr_by_handle: dict[int, Pointer] = {}
        self._handle_by_ptr: dict[Pointer, int] = {}
        self._next_handle = 1

    # -- fault plumbing ---------------------------------------------------

    def _raise_fault(self, kind: FaultKind, loc: str, detail: str):
        if self.fault is None:
            self.fault = Fault(kind, loc, detail)
        raise MemoryFaultError(self.fault)

    def _check_latch(self):
        if self.fault is not None:
            raise MemoryFaultError(self.fault)

    # -- allocation -------------------------------------------------------

    def alloc(self, size: int) -> Pointer:
        self._check_latch()
        if size < 0:
            raise ValueError("negative allocation size")
        if size == 0 and self.config.zero_alloc_returns_null:
            return NULL_PTR
        a = Allocation(id=self._next_id, size=size)
        self._next_id += 1
        self.allocations[a.id] = a
        return Pointer.valid(a.id, 0)

    def free(self, p: Pointer, loc: str = "free"):
        self._check_latch()
        if p.is_null:
            return
        if p.is_wild:
            self._raise_fault(FaultKind.WILD_DEREF, loc, f"free of {p!r}")
        a = self.allocations.get(p.alloc_id)
        if a is None or a.freed:
            self._raise_fault(FaultKind.USE_AFTER_FREE, loc,
                              f"free of already-freed or unknown {p!r}")
        if p.offset != 0:
            self._raise_fault(FaultKind.OUT_OF_BOUNDS, loc, f"free of interior pointer {p!r}")
        a.freed = True

    # -- access checking --------------------------------------------------

    def _checked_alloc(self, p: Pointer, length: int, loc: str) -> Allocation:
        """Validity gate shared by read/write/havoc; length > 0 here."""
        if p.is_null:
            self._raise_fault(FaultKind.NULL_DEREF, loc, f"{length}-byte access through null")
        if p.is_wild:
            self._raise_fault(FaultKind.WILD_DEREF, loc, f"{length}-byte access through {p!r}")
        a = self.allocations.get(p.alloc_id)
        if a is None:
            self._raise_fault(FaultKind.USE_AFTER_FREE, loc, f"access through unknown {p!r}")
        if a.freed:
            self._raise_fault(FaultKind.USE_AFTER_FREE, loc, f"access after free through {p!r}")
        if p.offset < 0 or p.offset + length > a.size:
            self._raise_fault(
                FaultKind.OUT_OF_BOUNDS, loc,
                f"[{p.offset},{p.offset + length}) outside allocation of {a.size} bytes")
        return a

    def _zero_len_gate(self, p: Pointer, loc: str) -> bool:
        """Returns True when a zero-length access should be treated as a
        no-op.  Under the strict config, zero-length access through an
        invalid pointer is itself a fault."""
        if self.config.zero_size_access_is_fault and not self._derefable(p, 0, strict=True):
            self._raise_fault(FaultKind.ZERO_SIZE_ACCESS, loc,
                              f"zero-length access through {p!r}")
        return True

    def _derefable(self, p: Pointer, length: int, strict: bool = False) -> bool:
        if length == 0 and not strict:
            return True
        if p.is_null or p.is_wild:
            return False
        a = self.allocations.get(p.alloc_id)
        if a is None or a.freed:
            return False
        return 0 <= p.offset and p.offset + max(length, 0) <= a.size

    def is_deref(self, p: Pointer, length: int) -> bool:
        """Pure query: would a read of `length` bytes raise a validity
        fault?  Never faults itself; uninitialized content is not
        considered."""
        return self._derefable(p, length)

    def is_init(self, p: Pointer, length: int) -> bool:
        """Pure query: region dereferenceable and every byte carries content
        (written or havocked)."""
        if not self._derefable(p, length):
            return False
        if length == 0:
            return True
        a = self.allocations[p.alloc_id]
        return all(a.state[i] != _UNINIT for i in range(p.offset, p.offset + length))

    # -- data movement ----------------------------------------------------

    def _materialize(self, a: Allocation, i: int, loc: str):
        if self.byte_source is None:
            raise UsageError(
                f"read of havocked byte at {loc} with no nondeterminism source attached")
        a.data[i] = self.byte_source() & 0xFF
        a.state[i] = _INIT  # epoch unchanged: content was written at havoc time

    def read(self, p: Pointer, length: int, loc: str = "read") -> bytes:
        self._check_latch()
        if length < 0:
            raise ValueError("negative read length")
        if length == 0:
            self._zero_len_gate(p, loc)
            return b""
        a = self._checked_alloc(p, length, loc)
        lo, hi = p.offset, p.offset + length
        for i in range(lo, hi):
            s = a.state[i]
            if s == _HAVOC:
                self._materialize(a, i, loc)
            elif s == _UNINIT and self.config.uninit_read_is_fault:
                self._raise_fault(FaultKind.UNINIT_READ, loc,
                                  f"byte {i} of allocation {a.id} read before any write")
        return bytes(a.data[lo:hi])

    def write(self, p: Pointer, data: Iterable[int] | bytes, loc: str = "write"):
        self._check_latch()
        buf = bytes(data)
        if len(buf) == 0:
            self._zero_len_gate(p, loc)
            return
        a = self._checked_alloc(p, len(buf), loc)
        self.global_epoch += 1
        lo = p.offset
        for j, v in enumerate(buf):
            i = lo + j
            a.data[i] = v
            a.state[i] = _INIT
            a.epochs[i] = self.global_epoch
            a.tags[i] = TAG_U8

    def havoc(self, p: Pointer, length: int, loc: str = "havoc"):
        """Fill a region with nondeterministic content (drawn lazily on
        first read).  Counts as a write: epochs bump, tags clear."""
        self._check_latch()
        if length < 0:
            raise ValueError("negative havoc length")
        if length == 0:
            self._zero_len_gate(p, loc)
            return
        a = self._checked_alloc(p, length, loc)
        self.global_epoch += 1
        for i in range(p.offset, p.offset + length):
            a.state[i] = _HAVOC
            a.epochs[i] = self.global_epoch
            a.tags[i] = TAG_NONE

    # -- modification tracking --------------------------------------------

    def tracking_on(self):
        self.tracking_epoch = self.global_epoch

    def is_mod(self, p: Pointer, length: int, loc: str = "is_mod") -> bool:
        """True iff any byte in range was written after the last
        tracking_on.  Epoch semantics: rewriting a byte with its old value
        still counts as a modification."""
        self._check_latch()
        if self.tracking_epoch is None:
            raise UsageError("is_mod called before tracking_on")
        if length == 0:
            return False
        a = self._checked_alloc(p, length, loc)
        te = self.tracking_epoch
        return any(a.epochs[i] > te for i in range(p.offset, p.offset + length))

    # -- typed access -----------------------------------------------------

    def typed_read_u64(self, p: Pointer, loc: str = "typed_read_u64") -> int:
        self._check_latch()
        a = self._checked_alloc(p, 8, loc)
        if self.config.typed_access_check:
            for i in range(p.offset, p.offset + 8):
                if a.tags[i] not in (TAG_NONE, TAG_U64):
                    self._raise_fault(
                        FaultKind.TYPED_ACCESS_VIOLATION, loc,
                        f"8-byte typed read of byte {i} last written with a narrower type")
        return int.from_bytes(self.read(p, 8, loc), "little")

    def typed_write_u64(self, p: Pointer, value: int, loc: str = "typed_write_u64"):
        self.write(p, (value & U64_MASK).to_bytes(8, "little"), loc)
        a = self.allocations[p.alloc_id]
        for i in range(p.offset, p.offset + 8):
            a.tags[i] = TAG_U64

    # -- scalar / pointer field helpers ------------------------------------

    def read_u64(self, p: Pointer, loc: str = "read_u64") -> int:
        """Untyped little-endian 8-byte read (no effective-type check)."""
        return int.from_bytes(self.read(p, 8, loc), "little")

    def write_u64(self, p: Pointer, value: int, loc: str = "write_u64"):
        self.write(p, (value & U64_MASK).to_bytes(8, "little"), loc)

    def write_ptr(self, p: Pointer, value: Pointer, loc: str = "write_ptr"):
        """Store a pointer value as 8 little-endian bytes of an interned
        handle.  Handles are per-heap and deterministic."""
        if value.is_null:
            handle = 0
        else:
            handle = self._handle_by_ptr.get(value)
            if handle is None:
                handle = self._next_handle
                self._next_handle += 1
                self._handle_by_ptr[value] = handle
                self._ptr_by_handle[handle] = value
        self.write(p, handle.to_bytes(8, "little"), loc)
        a = self.allocations[p.alloc_id]
        for i in range(p.offset, p.offset + 8):
            a.tags[i] = TAG_PTR

    def read_ptr(self, p: Pointer, loc: str = "read_ptr") -> Pointer:
        """Decode 8 bytes as a pointer.  Bytes that do not decode to a live
        handle (scribbled or havocked storage) yield a wild pointer, so a
        later dereference faults instead of silently aliasing."""
        raw = int.from_bytes(self.read(p, 8, loc), "little")
        if raw == 0:
            return NULL_PTR
        q = self._ptr_by_handle.get(raw)
        if q is None:
            return Pointer.wild(f"bits:{raw:#x}")
        return q

    # -- ordering ----------------------------------------------------------

    @staticmethod
    def ptr_cmp(p: Pointer, q: Pointer) -> int:
        """Total, run-consistent order: null < valid (by id, offset) < wild
        (by token)."""
        kp, kq = _cmp_key(p), _cmp_key(q)
        return -1 if kp < kq else (0 if kp == kq else 1)


def _cmp_key(p: Pointer):
    if p.kind is PtrKind.NULL:
        return (0, 0, 0, "")
    if p.kind is PtrKind.VALID:
        return (1, p.alloc_id, p.offset, "")
    return (2, 0, 0, p.token)


U64_MASK = (1 << 64) - 1
