import json
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Iterator, TextIO, Tuple
from chargedfock.partition import EMPTY, Partition, level, make_partition, z_factor
from chargedfock.scalar import GaussianRational, Scalar, conj, format_rational


SectorKey = Tuple[int, Partition]
TensorKey = Tuple[int, Partition, Partition]


def accumulate(entries: Dict[Hashable, Scalar], key: Hashable, value: Scalar) -> None:
    if key in entries:
        entries[key] = entries[key] + value
    else:
        entries[key] = value


class FockState:
    """
    Sparse vector over an unnormalized monomial basis. Values are immutable:
    every operation returns a new state. `overflow` records that some
    component was dropped by the truncation on the way here.
    """
    def __init__(self, entries: Dict[Hashable, Scalar] = None, overflow: bool = False):
        self.entries: Dict[Hashable, Scalar] = {}
        if entries:
            for key, value in entries.items():
                if value != 0:
                    self.entries[key] = value
        self.overflow: bool = overflow

    def _new(self, entries: Dict[Hashable, Scalar], overflow: bool) -> "FockState":
        return self.__class__(entries, overflow)

    def gram_weight(self, key: Hashable) -> int:
        raise NotImplementedError

    def items(self) -> Iterator[Tuple[Hashable, Scalar]]:
        return iter(self.entries.items())

    def keys(self):
        return self.entries.keys()

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: Hashable) -> Scalar:
        return self.entries.get(key, 0)

    def __contains__(self, key: Hashable) -> bool:
        return key in self.entries

    def is_zero(self) -> bool:
        return not self.entries

    def _check_kind(self, other: "FockState") -> None:
        if type(other) is not type(self):
            raise TypeError(f"Cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other: "FockState") -> "FockState":
        self._check_kind(other)
        entries = dict(self.entries)
        for key, value in other.items():
            accumulate(entries, key, value)
        return self._new(entries, self.overflow or other.overflow)

    def __neg__(self) -> "FockState":
        return self._new({k: -v for k, v in self.entries.items()}, self.overflow)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + (-other)

    def __mul__(self, c: Scalar) -> "FockState":
        if isinstance(c, FockState):
            return NotImplemented
        return self._new({k: c * v for k, v in self.entries.items()}, self.overflow)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        flag = ", overflow" if self.overflow else ""
        body = ", ".join(f"{k}: {v}" for k, v in self.entries.items())
        return f"{type(self).__name__}({{{body}}}{flag})"

    def flagged(self, overflow: bool) -> "FockState":
        return self._new(self.entries, self.overflow or overflow)


class SectorState(FockState):
    """Vector of one chiral truncated space, keyed by (j, partition)."""
    def gram_weight(self, key: SectorKey) -> int:
        return z_factor(key[1])

    @staticmethod
    def basis(j: int, parts: Iterable[int] = EMPTY, coef: Scalar = 1) -> "SectorState":
        return SectorState({(j, make_partition(parts)): coef})

    @staticmethod
    def vacuum(j: int = 0) -> "SectorState":
        return SectorState({(j, EMPTY): 1})

    def max_level(self) -> int:
        return max((level(p) for _, p in self.entries), default=0)


class TensorState(FockState):
    """Vector of the diagonal-charge space, keyed by (j, left, right)."""
    def gram_weight(self, key: TensorKey) -> int:
        return z_factor(key[1]) * z_factor(key[2])

    @staticmethod
    def basis(j: int, left: Iterable[int] = EMPTY, right: Iterable[int] = EMPTY,
              coef: Scalar = 1) -> "TensorState":
        return TensorState({(j, make_partition(left), make_partition(right)): coef})

    @staticmethod
    def vacuum(j: int = 0) -> "TensorState":
        return TensorState({(j, EMPTY, EMPTY): 1})

    def max_level(self) -> int:
        return max((max(level(l), level(r)) for _, l, r in self.entries), default=0)


def tensor_product(left: SectorState, right: SectorState) -> TensorState:
    entries: Dict[TensorKey, Scalar] = {}
    for (jl, pl), cl in left.items():
        for (jr, pr), cr in right.items():
            if jl != jr:
                raise ValueError(f"Tensor product leaves the diagonal-charge space: {jl} != {jr}")
            accumulate(entries, (jl, pl, pr), cl * cr)
    return TensorState(entries, left.overflow or right.overflow)


def gram(p: Partition, q: Partition) -> int:
    return z_factor(p) if p == q else 0


def inner_product(v: FockState, w: FockState) -> Scalar:
    """Conjugate-linear in the first argument."""
    if type(v) is not type(w) or not isinstance(v, (SectorState, TensorState)):
        raise TypeError(f"inner_product needs two states of the same kind, got "
                        f"{type(v).__name__} and {type(w).__name__}")
    if len(w) < len(v):
        small, large, swap = w, v, True
    else:
        small, large, swap = v, w, False
    total = 0
    for key, a in small.items():
        if key not in large:
            continue
        b = large[key]
        if swap:
            total = total + conj(b) * a * v.gram_weight(key)
        else:
            total = total + conj(a) * b * v.gram_weight(key)
    return total


def norm_sq(v: FockState) -> Scalar:
    return inner_product(v, v)


def _format_scalar(x) -> Tuple[str, str]:
    if isinstance(x, GaussianRational):
        return format_rational(x.re), format_rational(x.im)
    if isinstance(x, (int, Fraction)):
        return format_rational(x), "0/1"
    x = complex(x)
    return repr(x.real), repr(x.imag)


def dump_state(state: FockState, fp: TextIO) -> None:
    """JSON lines, one record per basis component."""
    for key, value in state.items():
        re, im = _format_scalar(value)
        if isinstance(state, TensorState):
            j, left, right = key
            record = {"j": j, "left": list(left), "right": list(right), "re": re, "im": im}
        else:
            j, parts = key
            record = {"j": j, "left": list(parts), "re": re, "im": im}
        fp.write(json.dumps(record) + "\n")


def _parse_value(text: str):
    if "/" in text:
        return Fraction(text)
    return float(text)


def load_tensor_state(fp: TextIO) -> TensorState:
    entries: Dict[TensorKey, Scalar] = {}
    for line in fp:
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        re = _parse_value(record["re"])
        im = _parse_value(record["im"])
        if im == 0:
            value = re
        elif isinstance(re, Fraction) and isinstance(im, Fraction):
            value = GaussianRational(re, im)
        else:
            value = complex(float(re), float(im))
        key = (record["j"], make_partition(record["left"]), make_partition(record.get("right", [])))
        accumulate(entries, key, value)
    return TensorState(entries)