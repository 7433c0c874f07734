"""Cell complex of a discretized relative braid class and its Conley index pair.

For one free strand with period d, a configuration is a point of (-1,1)^d and
the fixed values at each slot (skeleton anchors plus the boundary markers +-1)
cut the cube into a regular product complex.  A cell assigns to each slot
either a gap between consecutive fixed values or a pin onto one of them; its
dimension is the number of gap slots.  A pinned slot is classified through the
neighbouring slots:

* straddle  -- the free strand crosses the pinned strand transversally; the
  face is interior to the braid class and joins two top cells of it;
* tangency  -- both neighbours sit on the same side; the face lies in the
  discriminant and walls the class off from a class whose crossing number
  differs by exactly two.

The index pair takes N = closure of the class component and N^- = the faces
through which the crossing number drops, the combinatorial transcription of
the monotonicity of crossings under parabolic/Cauchy-Riemann dynamics.  The
exit rule itself is an interpretation (the discrete literature fixes only the
direction of decrease); it is validated against the computed cyclic classes.

Cells are encoded as mixed-radix integers over per-slot state tables, so the
closure enumeration works on machine ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .discrete import DiscreteRelativeBraid, pair_crossings
from .errors import BraidInputError, ImproperClassError, TransversalityError

BARRIER_LOW = -1
BARRIER_HIGH = -2

COMPONENT_CUBE_CAP = 500_000
INDEX_CELL_CAP = 1_500_000


@dataclass(frozen=True)
class SlotTable:
    """Fixed values of one slot: skeleton anchors plus the two markers."""

    values: tuple[Fraction, ...]          # sorted, markers at the extremes
    owners: tuple[int, ...]               # skeleton strand id or barrier constant
    prev_values: tuple[Fraction, ...]     # owner's value one slot earlier
    next_values: tuple[Fraction, ...]     # owner's value one slot later
    mids: tuple[Fraction, ...]            # gap midpoints

    @property
    def ngaps(self) -> int:
        return len(self.values) - 1

    @property
    def nstates(self) -> int:
        # gaps are states 0..ngaps-1, pins follow as ngaps + f
        return 2 * len(self.values) - 1


class ComplexGeometry:
    """Per-slot state tables and the integer cell encoding."""

    def __init__(self, rb: DiscreteRelativeBraid):
        if rb.free.strands != 1:
            raise NotImplementedError(
                "index pairs are implemented for one free strand; the cell "
                "model extends to several but this version does not build it"
            )
        if rb.period < 2:
            raise BraidInputError("braid complexes need period >= 2")
        self.rb = rb
        self.period = rb.period
        sk = rb.skeleton
        slots = []
        for i in range(rb.period):
            entries = [(Fraction(-1), BARRIER_LOW), (Fraction(1), BARRIER_HIGH)]
            entries.extend((sk.anchors[l][i], l) for l in range(sk.strands))
            entries.sort()
            values = tuple(v for v, _ in entries)
            if len(set(values)) != len(values):
                raise TransversalityError(f"coincident fixed values at slot {i}")
            owners = tuple(o for _, o in entries)
            prev_v, next_v = [], []
            for v, o in entries:
                if o in (BARRIER_LOW, BARRIER_HIGH):
                    prev_v.append(v)
                    next_v.append(v)
                else:
                    prev_v.append(sk.value(o, i - 1))
                    next_v.append(sk.value(o, i + 1))
            mids = tuple(
                (values[g] + values[g + 1]) / 2 for g in range(len(values) - 1)
            )
            slots.append(SlotTable(values, owners, tuple(prev_v), tuple(next_v), mids))
        self.slots: list[SlotTable] = slots
        self.strides = []
        acc = 1
        for t in slots:
            self.strides.append(acc)
            acc *= t.nstates
        self.total_states = acc

    # -- state helpers ----------------------------------------------------
    def gap_state(self, i: int, g: int) -> int:
        return g

    def pin_state(self, i: int, f: int) -> int:
        return self.slots[i].ngaps + f

    def is_gap(self, i: int, state: int) -> bool:
        return state < self.slots[i].ngaps

    def pin_index(self, i: int, state: int) -> int:
        return state - self.slots[i].ngaps

    def encode(self, states: Iterable[int]) -> int:
        total = 0
        for s, stride in zip(states, self.strides):
            total += s * stride
        return total

    def decode(self, cell: int) -> list[int]:
        out = []
        for t in self.slots:
            cell, s = divmod(cell, t.nstates)
            out.append(s)
        return out

    # -- classification ----------------------------------------------------
    def classify_pin(self, i: int, f: int, g_prev: int, g_next: int) -> tuple[str, int]:
        """('straddle'|'tangency', side) for a pin with gap neighbours."""
        t = self.slots[i]
        d = self.period
        a = self.slots[(i - 1) % d].mids[g_prev] - t.prev_values[f]
        b = self.slots[(i + 1) % d].mids[g_next] - t.next_values[f]
        if (a < 0) != (b < 0):
            return "straddle", 0
        return "tangency", 1 if a > 0 else -1

    def cube_crossing_number(self, cube: tuple[int, ...]) -> int:
        """Total crossings of the representative free strand with everything."""
        rep = self.representative(cube)
        sk = self.rb.skeleton
        d = self.period
        total = self._skeleton_crossings
        for i in range(d):
            u0, u1 = rep[i], rep[(i + 1) % d]
            for l in range(sk.strands):
                a = u0 - sk.value(l, i)
                b = u1 - sk.value(l, i + 1)
                if (a < 0) != (b < 0):
                    total += 1
        return total

    def representative(self, cube: tuple[int, ...]) -> list[Fraction]:
        return [self.slots[i].mids[g] for i, g in enumerate(cube)]

    @property
    def _skeleton_crossings(self) -> int:
        sk = self.rb.skeleton
        if not hasattr(self, "_sk_cross"):
            total = 0
            for k in range(sk.strands):
                for l in range(k + 1, sk.strands):
                    for i in range(sk.period):
                        total += pair_crossings(sk, k, l, i)
            self._sk_cross = total
        return self._sk_cross


@dataclass
class BraidClassComponent:
    """Connected set of top cells with their shared crossing number."""

    geometry: ComplexGeometry
    top_cells: frozenset[tuple[int, ...]]
    crossing_number: int
    proper: bool
    collapse_witness: dict | None = None


@dataclass
class IndexPair:
    """Closure N of a braid class component with its exit set."""

    component: BraidClassComponent
    cells: set[int]           # all of N, encoded
    exit: set[int]            # N^-, a subcomplex of N
    dims: dict[int, int] = field(repr=False, default_factory=dict)

    @property
    def geometry(self) -> ComplexGeometry:
        return self.component.geometry

    def relative_cells(self) -> list[int]:
        return [c for c in self.cells if c not in self.exit]

    def dim_of(self, cell: int) -> int:
        geo = self.geometry
        return sum(1 for i, s in enumerate(geo.decode(cell)) if geo.is_gap(i, s))

    def boundary(self, cell: int) -> list[int]:
        """Relative boundary: faces inside the exit set are dropped."""
        geo = self.geometry
        states = geo.decode(cell)
        out = []
        for i, s in enumerate(states):
            if not geo.is_gap(i, s):
                continue
            g = s
            for f in (g, g + 1):
                face = cell + (geo.pin_state(i, f) - s) * geo.strides[i]
                if face not in self.exit:
                    out.append(face)
        return out

    def cofaces(self, cell: int) -> list[int]:
        geo = self.geometry
        states = geo.decode(cell)
        out = []
        for i, s in enumerate(states):
            if geo.is_gap(i, s):
                continue
            f = geo.pin_index(i, s)
            for g in (f - 1, f):
                if 0 <= g < geo.slots[i].ngaps:
                    cof = cell + (g - s) * geo.strides[i]
                    if cof in self.cells:
                        out.append(cof)
        return out

    def chain_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for c in self.cells:
            if c in self.exit:
                continue
            k = self.dim_of(c)
            counts[k] = counts.get(k, 0) + 1
        return counts

    def validate(self) -> None:
        """Exit set must be a subcomplex of N closed under the face relation."""
        geo = self.geometry
        for cell in self.exit:
            if cell not in self.cells:
                raise AssertionError("exit cell outside N")
            states = geo.decode(cell)
            for i, s in enumerate(states):
                if not geo.is_gap(i, s):
                    continue
                for f in (s, s + 1):
                    face = cell + (geo.pin_state(i, f) - s) * geo.strides[i]
                    if face not in self.exit:
                        raise AssertionError("exit set not closed under faces")

    def to_chain_json(self) -> dict:
        """Chain-complex dump (relative cells only) for external verification."""
        cells = sorted(self.relative_cells())
        return {
            "generators": [{"id": c, "dim": self.dim_of(c)} for c in cells],
            "boundaries": {str(c): sorted(self.boundary(c)) for c in cells},
        }


def _initial_cube(geo: ComplexGeometry) -> tuple[int, ...]:
    rb = geo.rb
    cube = []
    for i in range(geo.period):
        u = rb.free.anchors[0][i]
        t = geo.slots[i]
        g = None
        for gg in range(t.ngaps):
            if t.values[gg] < u < t.values[gg + 1]:
                g = gg
                break
        if g is None:
            raise BraidInputError(
                f"free anchor at slot {i} coincides with a fixed value; "
                "jitter the input inside its gap"
            )
        cube.append(g)
    return tuple(cube)


def enumerate_component(rb: DiscreteRelativeBraid) -> BraidClassComponent:
    """Flood-fill the discretized braid class across its interior faces."""
    geo = ComplexGeometry(rb)
    d = geo.period
    start = _initial_cube(geo)
    cross = geo.cube_crossing_number(start)
    seen = {start}
    stack = [start]
    while stack:
        cube = stack.pop()
        for i in range(d):
            g = cube[i]
            g_prev = cube[(i - 1) % d]
            g_next = cube[(i + 1) % d]
            for f, other in ((g, g - 1), (g + 1, g + 1)):
                if not 0 <= other < geo.slots[i].ngaps:
                    continue
                kind, _ = geo.classify_pin(i, f, g_prev, g_next)
                if kind != "straddle":
                    continue
                nxt = cube[:i] + (other,) + cube[i + 1:]
                if nxt in seen:
                    continue
                if len(seen) >= COMPONENT_CUBE_CAP:
                    raise RuntimeError("braid class component exceeds the cube cap")
                if geo.cube_crossing_number(nxt) != cross:
                    raise AssertionError(
                        "crossing number changed across an interior face"
                    )
                seen.add(nxt)
                stack.append(nxt)
    proper, witness = _collapse_scan(geo, seen)
    return BraidClassComponent(geo, frozenset(seen), cross, proper, witness)


def _collapse_scan(geo: ComplexGeometry, cubes) -> tuple[bool, dict | None]:
    """Look for a cell of the closure identifying the free strand with a
    single-strand skeleton component or a boundary marker."""
    sk = geo.rb.skeleton
    targets = [(BARRIER_LOW, None), (BARRIER_HIGH, None)]
    for l in range(sk.strands):
        if sk.closure(l) == l:
            targets.append((l, None))
    for owner, _ in targets:
        fixed_idx = []
        for i in range(geo.period):
            t = geo.slots[i]
            fixed_idx.append(t.owners.index(owner))
        for cube in cubes:
            if all(fixed_idx[i] in (g, g + 1) for i, g in enumerate(cube)):
                witness = {
                    "collapses_onto": (
                        "boundary -1" if owner == BARRIER_LOW
                        else "boundary +1" if owner == BARRIER_HIGH
                        else f"skeleton strand {owner}"
                    ),
                    "pinned_values": [
                        str(geo.slots[i].values[fixed_idx[i]]) for i in range(geo.period)
                    ],
                    "from_top_cell": list(cube),
                }
                return False, witness
    return True, None


def index_pair(comp: BraidClassComponent) -> IndexPair:
    """Closure of the component plus the faces where crossings drop."""
    if not comp.proper:
        raise ImproperClassError(
            "index pair of an improper class is undefined", comp.collapse_witness
        )
    geo = comp.geometry
    d = geo.period

    # exit facets: tangency walls with the component on the hooked-over side
    exit_seeds = []
    for cube in comp.top_cells:
        for i in range(d):
            g = cube[i]
            for f in (g, g + 1):
                kind, side = geo.classify_pin(i, f, cube[(i - 1) % d], cube[(i + 1) % d])
                if kind != "tangency":
                    continue
                cube_side = 1 if f == g else -1  # gap above or below the pin
                if cube_side == -side:
                    states = [geo.gap_state(j, gg) for j, gg in enumerate(cube)]
                    states[i] = geo.pin_state(i, f)
                    exit_seeds.append(geo.encode(states))

    # N: closure of the component, enumerated by pinning one slot at a time
    cells: set[int] = set()
    frontier = []
    for cube in comp.top_cells:
        cid = geo.encode(cube)
        if cid not in cells:
            cells.add(cid)
            frontier.append(cid)
    while frontier:
        cell = frontier.pop()
        states = geo.decode(cell)
        for i, s in enumerate(states):
            if not geo.is_gap(i, s):
                continue
            for f in (s, s + 1):
                face = cell + (geo.pin_state(i, f) - s) * geo.strides[i]
                if face not in cells:
                    if len(cells) >= INDEX_CELL_CAP:
                        raise BraidInputError(
                            f"index pair exceeds {INDEX_CELL_CAP} cells; "
                            "the class is beyond this build's desk scale"
                        )
                    cells.add(face)
                    frontier.append(face)

    # N^-: downward closure of the exit facets
    exit_cells: set[int] = set()
    frontier = []
    for cell in exit_seeds:
        if cell not in exit_cells:
            exit_cells.add(cell)
            frontier.append(cell)
    while frontier:
        cell = frontier.pop()
        states = geo.decode(cell)
        for i, s in enumerate(states):
            if not geo.is_gap(i, s):
                continue
            for f in (s, s + 1):
                face = cell + (geo.pin_state(i, f) - s) * geo.strides[i]
                if face not in exit_cells:
                    exit_cells.add(face)
                    frontier.append(face)

    pair = IndexPair(comp, cells, exit_cells)
    pair.validate()
    return pair


def component_contains(comp: BraidClassComponent, free_values) -> bool:
    """Whether a free-strand value vector lies in one of the component's cubes."""
    geo = comp.geometry
    cube = []
    for i, u in enumerate(free_values):
        t = geo.slots[i]
        g = None
        for gg in range(t.ngaps):
            if t.values[gg] < u < t.values[gg + 1]:
                g = gg
                break
        if g is None:
            return False
        cube.append(g)
    return tuple(cube) in comp.top_cells
