"""Arithmetic circuits: DAGs of input, constant, addition and multiplication gates.

Gates are numbered topologically (a gate only references smaller ids).  A
circuit may designate several output gates; the extended-system fusion
produces one output per equation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra.fields import Field, QQ, Scalar
from .algebra.polynomial import PolyRing, Polynomial
from .errors import CyclicDependency, FieldMismatch, ParseError, ResourceLimit


@dataclass(frozen=True)
class Input:
    label: str


@dataclass(frozen=True)
class Const:
    value: Scalar


@dataclass(frozen=True)
class Add:
    left: int
    right: int


@dataclass(frozen=True)
class Mul:
    left: int
    right: int


Gate = Union[Input, Const, Add, Mul]


@dataclass(frozen=True)
class Circuit:
    field: Field
    gates: Tuple[Gate, ...]
    outputs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for i, g in enumerate(self.gates):
            if isinstance(g, (Add, Mul)):
                if not (0 <= g.left < i and 0 <= g.right < i):
                    raise CyclicDependency(f"gate {i} references a gate that does not precede it")
            elif isinstance(g, Const):
                if not self.field.contains(g.value):
                    raise FieldMismatch(f"constant {g.value!r} is not in {self.field}")
            elif not isinstance(g, Input):
                raise TypeError(f"not a gate: {g!r}")
        if not self.outputs:
            raise ValueError("a circuit needs at least one output")
        for o in self.outputs:
            if not 0 <= o < len(self.gates):
                raise ValueError(f"output {o} is not a gate id")

    @property
    def labels(self) -> List[str]:
        """Input labels in order of first appearance."""
        seen: List[str] = []
        for g in self.gates:
            if isinstance(g, Input) and g.label not in seen:
                seen.append(g.label)
        return seen

    @property
    def output(self) -> int:
        if len(self.outputs) != 1:
            raise ValueError("circuit has several outputs")
        return self.outputs[0]


class CircuitBuilder:
    """Incremental construction with sharing of inputs and constants."""

    def __init__(self, field: Field = QQ):
        self.field = field
        self.gates: List[Gate] = []
        self._inputs: Dict[str, int] = {}
        self._consts: Dict[Scalar, int] = {}

    def _push(self, g: Gate) -> int:
        self.gates.append(g)
        return len(self.gates) - 1

    def input(self, label: str) -> int:
        if label not in self._inputs:
            self._inputs[label] = self._push(Input(label))
        return self._inputs[label]

    def const(self, value) -> int:
        v = self.field(value)
        if v not in self._consts:
            self._consts[v] = self._push(Const(v))
        return self._consts[v]

    def add(self, a: int, b: int) -> int:
        return self._push(Add(a, b))

    def mul(self, a: int, b: int) -> int:
        return self._push(Mul(a, b))

    def neg(self, a: int) -> int:
        return self.mul(self.const(-1), a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def build(self, outputs: Union[int, Sequence[int]]) -> Circuit:
        if isinstance(outputs, int):
            outputs = [outputs]
        return Circuit(self.field, tuple(self.gates), tuple(outputs))


def evaluate_gates(
    c: Circuit,
    inputs: Mapping[str, object],
    lift: Optional[Callable[[Scalar], object]] = None,
) -> List[object]:
    """Values of the output gates over any ring whose elements support + and *.

    ``lift`` maps constant gate values into that ring (identity by default).
    """
    vals: List[object] = []
    for g in c.gates:
        if isinstance(g, Input):
            try:
                vals.append(inputs[g.label])
            except KeyError:
                raise KeyError(f"missing input {g.label!r}") from None
        elif isinstance(g, Const):
            vals.append(g.value if lift is None else lift(g.value))
        elif isinstance(g, Add):
            vals.append(vals[g.left] + vals[g.right])
        else:
            vals.append(vals[g.left] * vals[g.right])
    return [vals[o] for o in c.outputs]


def circuit_eval(c: Circuit, inputs: Mapping[str, Scalar]):
    """Value of the output gate (a tuple when the circuit has several outputs)."""
    field = c.field
    for label in c.labels:
        if label not in inputs:
            raise KeyError(f"missing input {label!r}")
    pt = {label: field(v) for label, v in inputs.items() if label in set(c.labels)}
    out = [field.norm(v) for v in evaluate_gates(c, pt)]
    return out[0] if len(out) == 1 else tuple(out)


def circuit_to_polynomial(
    c: Circuit,
    max_terms: int,
    ring: PolyRing | None = None,
    output: int = 0,
) -> Polynomial:
    """Expand one output into a sparse polynomial, aborting past ``max_terms`` terms."""
    if max_terms <= 0:
        raise ValueError("max_terms must be positive")
    if ring is None:
        ring = PolyRing(c.field, c.labels)
    if ring.field != c.field:
        raise FieldMismatch("ring and circuit fields differ")
    target = c.outputs[output]
    needed = _cone(c, target)
    vals: Dict[int, Polynomial] = {}
    for i, g in enumerate(c.gates):
        if i not in needed:
            continue
        if isinstance(g, Input):
            p = ring.gen(ring.index(g.label))
        elif isinstance(g, Const):
            p = ring.const(g.value)
        elif isinstance(g, Add):
            p = vals[g.left] + vals[g.right]
        else:
            p = vals[g.left] * vals[g.right]
        if len(p) > max_terms:
            raise ResourceLimit(f"expansion exceeds the budget of {max_terms} terms at gate {i}")
        vals[i] = p
    return vals[target]


def _cone(c: Circuit, root: int) -> set:
    seen = set()
    stack = [root]
    while stack:
        i = stack.pop()
        if i in seen:
            continue
        seen.add(i)
        g = c.gates[i]
        if isinstance(g, (Add, Mul)):
            stack.append(g.left)
            stack.append(g.right)
    return seen


def polynomial_to_circuit(p: Polynomial) -> Circuit:
    """Sum-of-monomials circuit for p (inputs labelled by the ring's variable names)."""
    b = CircuitBuilder(p.field)
    acc = None
    for m, coeff in p.sorted_terms():
        t = None if coeff == 1 else b.const(coeff)
        for name, e in zip(p.ring.names, m):
            for _ in range(e):
                x = b.input(name)
                t = x if t is None else b.mul(t, x)
        if t is None:
            t = b.const(coeff)
        acc = t if acc is None else b.add(acc, t)
    if acc is None:
        acc = b.const(0)
    return b.build(acc)


def fuse_extended(
    circuits: Sequence[Circuit],
    x_labels: Sequence[str] | None = None,
    z_labels: Sequence[str] | None = None,
) -> Circuit:
    """Merge per-equation circuits of an extended system into one k-output circuit.

    Circuit i may read the current values ``x_labels`` and the next-step values
    ``z_labels[:i]`` of the equations before it; each such z input is wired to
    the output gate of the corresponding equation and duplicate x inputs are
    merged.
    """
    k = len(circuits)
    if k == 0:
        raise ValueError("nothing to fuse")
    x_labels = list(x_labels) if x_labels is not None else [f"x{i + 1}" for i in range(k)]
    z_labels = list(z_labels) if z_labels is not None else [f"z{i + 1}" for i in range(k)]
    field = circuits[0].field
    zpos = {z: j for j, z in enumerate(z_labels)}
    xset = set(x_labels)
    b = CircuitBuilder(field)
    outs: List[int] = []
    for i, c in enumerate(circuits):
        if c.field != field:
            raise FieldMismatch("circuits over different fields")
        remap: List[int] = []
        for g in c.gates:
            if isinstance(g, Input):
                if g.label in zpos:
                    j = zpos[g.label]
                    if j >= i:
                        raise CyclicDependency(
                            f"equation {i + 1} reads {g.label!r}, which is not computed before it"
                        )
                    remap.append(outs[j])
                elif g.label in xset:
                    remap.append(b.input(g.label))
                else:
                    raise ValueError(f"equation {i + 1} reads unknown input {g.label!r}")
            elif isinstance(g, Const):
                remap.append(b.const(g.value))
            elif isinstance(g, Add):
                remap.append(b.add(remap[g.left], remap[g.right]))
            else:
                remap.append(b.mul(remap[g.left], remap[g.right]))
        outs.append(remap[c.output])
    return b.build(outs)


def circuit_stats(c: Circuit) -> Dict[str, int]:
    """Gate count and the longest input-to-output path (in gates traversed)."""
    depth: List[int] = []
    for g in c.gates:
        if isinstance(g, (Input, Const)):
            depth.append(0)
        else:
            depth.append(1 + max(depth[g.left], depth[g.right]))
    return {"size": len(c.gates), "depth": max(depth[o] for o in c.outputs)}


# -- JSON --------------------------------------------------------------------

def circuit_to_json(c: Circuit) -> dict:
    gates = []
    for g in c.gates:
        if isinstance(g, Input):
            gates.append({"op": "input", "label": g.label})
        elif isinstance(g, Const):
            gates.append({"op": "const", "value": str(g.value)})
        elif isinstance(g, Add):
            gates.append({"op": "add", "l": g.left, "r": g.right})
        else:
            gates.append({"op": "mul", "l": g.left, "r": g.right})
    return {"field": c.field.to_json(), "gates": gates, "outputs": list(c.outputs)}


def circuit_from_json(obj: dict, field: Field | None = None) -> Circuit:
    """Inverse of :func:`circuit_to_json`; ``field`` overrides the stored tag."""
    try:
        fld = field or Field.from_json(obj["field"])
        gates: List[Gate] = []
        for i, g in enumerate(obj["gates"]):
            op = g["op"]
            if op == "input":
                gates.append(Input(str(g["label"])))
            elif op == "const":
                gates.append(Const(fld.parse(str(g["value"]))))
            elif op in ("add", "mul"):
                left, right = int(g["l"]), int(g["r"])
                if not (0 <= left < i and 0 <= right < i):
                    raise ParseError(f"gate {i} has a forward reference")
                gates.append(Add(left, right) if op == "add" else Mul(left, right))
            else:
                raise ParseError(f"unknown gate op {op!r}")
        return Circuit(fld, tuple(gates), tuple(int(o) for o in obj["outputs"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed circuit JSON: {exc}") from exc
