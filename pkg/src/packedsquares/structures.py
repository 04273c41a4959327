from dataclasses import dataclass, field
from typing import NamedTuple


class Run(NamedTuple):
    """Maximal periodic fragment T[start..end] (inclusive) with smallest period."""
    start: int
    end: int
    period: int

    @property
    def length(self):
        return self.end - self.start + 1

    def shifted(self, d):
        return Run(self.start + d, self.end + d, self.period)


class ArithmeticProgression(NamedTuple):
    first: int
    count: int
    difference: int

    @property
    def last(self):
        return self.first + (self.count - 1) * self.difference

    def positions(self):
        return range(self.first, self.first + self.count * self.difference, self.difference) \
            if self.count else range(0)


@dataclass
class RunCluster:
    """Base runs (absolute positions of the first copy) and shifts; 0 is always a shift."""
    base_runs: list
    shifts: list

    @property
    def size(self):
        return len(self.base_runs) + len(self.shifts)

    def runs(self):
        for d in self.shifts:
            for r in self.base_runs:
                yield Run(r.start + d, r.end + d, r.period)


@dataclass
class Pyramid:
    """Canonical form of the pyramid spanned by neighbouring runs F and Fp.

    Regular layer k (k_min <= k <= k_max) is the run
    [Fp.start - k*p - delta .. F.end + k*p + delta] with period k*p + delta.
    """
    F: Run
    Fp: Run
    delta: int
    k_min: int
    k_max: int
    max_layer: Run | None = None

    @property
    def p(self):
        return self.F.period

    @property
    def overlap(self):
        return self.F.end - self.Fp.start + 1

    @property
    def n_regular(self):
        return max(0, self.k_max - self.k_min + 1)

    def layer(self, k):
        p, d = self.F.period, self.delta
        return Run(self.Fp.start - k * p - d, self.F.end + k * p + d, k * p + d)

    def regular_layers(self):
        return [self.layer(k) for k in range(self.k_min, self.k_max + 1)]

    def layers(self):
        out = self.regular_layers()
        if self.max_layer is not None:
            out.append(self.max_layer)
        return out

    def to_json(self):
        return {
            "F": list(self.F), "Fp": list(self.Fp), "delta": self.delta,
            "k_min": self.k_min, "k_max": self.k_max,
            "max_layer": list(self.max_layer) if self.max_layer is not None else None,
        }


@dataclass
class RunsRepr:
    explicit_runs: list = field(default_factory=list)
    clusters: list = field(default_factory=list)
    pyramids: list = field(default_factory=list)
    # explicit runs that came from the tau-run scan, with Lyndon positions
    lyndon: dict = field(default_factory=dict)

    def denoted_runs(self):
        """Every run denoted by the three parts, as a list (may contain duplicates if the
        representation were not disjoint)."""
        out = list(self.explicit_runs)
        for c in self.clusters:
            out.extend(c.runs())
        for py in self.pyramids:
            out.extend(py.regular_layers())
        return out

    def stats(self):
        return {
            "explicit_runs": len(self.explicit_runs),
            "clusters": len(self.clusters),
            "cluster_size": sum(c.size for c in self.clusters),
            "pyramids": len(self.pyramids),
            "regular_layers": sum(py.n_regular for py in self.pyramids),
        }

    def to_json(self):
        return {
            "explicit_runs": [list(r) for r in self.explicit_runs],
            "clusters": [{"base_runs": [list(r) for r in c.base_runs], "shifts": list(c.shifts)}
                         for c in self.clusters],
            "pyramids": [py.to_json() for py in self.pyramids],
        }
