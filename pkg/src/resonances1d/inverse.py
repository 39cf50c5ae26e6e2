"""Recovery of the left half of a potential from scattering-determinant data.

The right part on [0, b] is assumed known; the left part on [a, 0] is
parameterized by equal-width cells and fitted to det S samples (or to a
target resonance set) by damped least squares.  A companion report
quantifies distinguishability: distinct left parts must produce visibly
different determinants.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .czeros import ZeroSet, resonances
from .errors import (
    DivergedLoss,
    JacobianSingular,
    SharedPartMismatch,
)
from .potential import Fragment, Potential
from .scattering import det_s, xhat, yhat


class LossKind(enum.Enum):
    DET_S_GRID = "det_s_grid"
    RESONANCE_MATCH = "resonance_match"


@dataclass(frozen=True)
class InverseProblemSpec:
    """What is known (right part), what is sought (left cells), and the data."""

    known_right: Fragment
    a: float
    n_params: int
    k_samples: tuple = ()
    det_s_values: tuple = ()
    target_zeros: tuple = ()
    target_radius: float = 0.0
    loss_kind: LossKind = LossKind.DET_S_GRID

    def __post_init__(self):
        if not self.a < 0:
            raise ValueError("left endpoint a must be negative")
        if self.n_params < 1:
            raise ValueError("need at least one left cell")
        if self.loss_kind is LossKind.DET_S_GRID:
            ks = np.asarray(self.k_samples, dtype=float)
            if ks.size == 0:
                raise ValueError("det-S loss needs k samples")
            if len(np.unique(ks)) != len(ks):
                raise ValueError("k samples must be distinct")
            if len(self.det_s_values) != len(ks):
                raise ValueError("data length must match k samples")

    def candidate(self, params):
        """Assemble the trial potential for a left-cell value vector.

        Construction bypasses zero-cell trimming so the parameter vector
        keeps a fixed length along the optimization path.
        """
        bp = [float(x) for x in np.linspace(self.a, 0.0, self.n_params + 1)]
        vs = [float(v) for v in np.asarray(params, dtype=float)]
        rbp = [float(x) for x in self.known_right.breakpoints]
        rvs = [float(v) for v in self.known_right.values]
        if rbp[0] > 0.0:
            # zero-valued filler between the origin and the known support
            vs.append(0.0)
        else:
            rbp = rbp[1:]
        bp.extend(rbp)
        vs.extend(rvs)
        p = object.__new__(Potential)
        object.__setattr__(p, "breakpoints", tuple(bp))
        object.__setattr__(p, "values", tuple(vs))
        object.__setattr__(p, "label", "candidate")
        return p

    def to_json(self):
        d = {
            "known_right": {
                "breakpoints": list(self.known_right.breakpoints),
                "values": list(self.known_right.values),
            },
            "a": self.a,
            "n_params": self.n_params,
            "loss_kind": self.loss_kind.value,
        }
        if self.loss_kind is LossKind.DET_S_GRID:
            d["data"] = {
                "k": list(self.k_samples),
                "det_s_re": [v.real for v in self.det_s_values],
                "det_s_im": [v.imag for v in self.det_s_values],
            }
        else:
            d["data"] = {
                "zeros_re": [z.real for z in self.target_zeros],
                "zeros_im": [z.imag for z in self.target_zeros],
                "radius": self.target_radius,
            }
        return d

    @classmethod
    def from_json(cls, d):
        kr = Fragment(
            tuple(d["known_right"]["breakpoints"]),
            tuple(d["known_right"]["values"]),
        )
        kind = LossKind(d.get("loss_kind", "det_s_grid"))
        data = d.get("data", {})
        if kind is LossKind.DET_S_GRID:
            vals = tuple(
                complex(re, im)
                for re, im in zip(data.get("det_s_re", []), data.get("det_s_im", []))
            )
            return cls(kr, float(d["a"]), int(d["n_params"]),
                       k_samples=tuple(data.get("k", [])),
                       det_s_values=vals, loss_kind=kind)
        zs = tuple(
            complex(re, im)
            for re, im in zip(data.get("zeros_re", []), data.get("zeros_im", []))
        )
        return cls(kr, float(d["a"]), int(d["n_params"]),
                   target_zeros=zs,
                   target_radius=float(data.get("radius", 0.0)),
                   loss_kind=kind)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class RecoveryResult:
    recovered_left: tuple
    final_loss: float
    iterations: int
    converged: bool
    l2_error_vs_truth: float = None
    loss_trace: tuple = ()

    def to_json(self):
        d = {
            "recovered_left": list(self.recovered_left),
            "final_loss": self.final_loss,
            "iterations": self.iterations,
            "converged": self.converged,
        }
        if self.l2_error_vs_truth is not None:
            d["l2_error_vs_truth"] = self.l2_error_vs_truth
        return d


def synthesize_data(spec_like_right, a, n_params, truth: Potential,
                    k_samples, loss_kind=LossKind.DET_S_GRID,
                    radius: float = 0.0) -> InverseProblemSpec:
    """Build a spec whose data comes from a known truth (round-trip input)."""
    if loss_kind is LossKind.DET_S_GRID:
        vals = tuple(complex(v) for v in det_s(truth, np.asarray(k_samples)))
        return InverseProblemSpec(spec_like_right, a, n_params,
                                  k_samples=tuple(k_samples),
                                  det_s_values=vals, loss_kind=loss_kind)
    zs = resonances(truth, radius)
    return InverseProblemSpec(spec_like_right, a, n_params,
                              target_zeros=tuple(zs.locations),
                              target_radius=radius, loss_kind=loss_kind)


def _residual_vector(spec, params):
    V = spec.candidate(params)
    if spec.loss_kind is LossKind.DET_S_GRID:
        model = det_s(V, np.asarray(spec.k_samples, dtype=float))
        diff = model - np.asarray(spec.det_s_values, dtype=complex)
        return np.concatenate([diff.real, diff.imag])
    zs = resonances(V, spec.target_radius)
    locs = zs.locations
    target = np.asarray(spec.target_zeros, dtype=complex)
    res = []
    # nearest-neighbour pairing; unmatched zeros pay their distance to the
    # search-domain boundary so cardinality mismatches stay penalized
    for t in target:
        if len(locs):
            res.append(np.min(np.abs(locs - t)))
        else:
            res.append(spec.target_radius - abs(t))
    if len(locs) > len(target):
        extra = sorted(np.min(np.abs(locs[:, None] - target[None, :]), axis=1))[
            len(target):
        ] if len(target) else [spec.target_radius - abs(z) for z in locs]
        res.extend(extra)
    return np.asarray(res, dtype=float)


def loss(spec: InverseProblemSpec, params) -> float:
    r = _residual_vector(spec, params)
    return float(np.dot(r, r))


def recover_left(spec: InverseProblemSpec, init, max_iter: int = 100,
                 tol: float = 1e-18) -> RecoveryResult:
    """Damped least squares on the left-cell values.

    Finite-difference Jacobian with step 1e-6*(1+|param|); accepted steps
    never increase the loss.  Raises DivergedLoss after 10 consecutive
    rejected steps and JacobianSingular when the damping exceeds 1e8.
    """
    p = np.asarray(init, dtype=float).copy()
    if len(p) != spec.n_params:
        raise ValueError("init length %d != n_params %d" % (len(p), spec.n_params))
    r = _residual_vector(spec, p)
    cur = float(np.dot(r, r))
    trace = [cur]
    lam = 1e-3
    rejected = 0
    it = 0
    for it in range(1, max_iter + 1):
        if cur < tol:
            break
        J = np.empty((len(r), len(p)))
        for j in range(len(p)):
            h = 1e-6 * (1.0 + abs(p[j]))
            pp = p.copy()
            pp[j] += h
            J[:, j] = (_residual_vector(spec, pp) - r) / h
        JtJ = J.T @ J
        g = J.T @ r
        stepped = False
        while not stepped:
            if lam > 1e8:
                raise JacobianSingular("damping exceeded 1e8 without progress")
            A = JtJ + lam * np.diag(np.clip(np.diag(JtJ), 1e-12, None))
            try:
                delta = np.linalg.solve(A, -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            r_new = _residual_vector(spec, p + delta)
            new = float(np.dot(r_new, r_new))
            if new < cur:
                p = p + delta
                r, cur = r_new, new
                trace.append(cur)
                lam = max(lam / 3.0, 1e-12)
                rejected = 0
                stepped = True
            else:
                lam *= 10
                rejected += 1
                if rejected >= 10:
                    raise DivergedLoss(
                        "loss failed to decrease over 10 consecutive damped steps"
                    )
        if float(np.linalg.norm(delta)) < 1e-13 * (1 + float(np.linalg.norm(p))):
            break
    return RecoveryResult(tuple(p), cur, it, cur < max(tol, 1e-10),
                          loss_trace=tuple(trace))


def _split_parts(V: Potential):
    return V.split_at_zero()


def _check_shared_right(V1: Potential, V2: Potential):
    r1 = _split_parts(V1)[1]
    r2 = _split_parts(V2)[1]
    if r1.breakpoints != r2.breakpoints or r1.values != r2.values:
        raise SharedPartMismatch("potentials do not agree on [0, b]")


def distinguishability(V1: Potential, V2: Potential, k_grid) -> float:
    """Max pointwise gap of the two scattering determinants over the grid."""
    _check_shared_right(V1, V2)
    k = np.asarray(k_grid, dtype=float)
    return float(np.max(np.abs(det_s(V1, k) - det_s(V2, k))))


@dataclass(frozen=True)
class UniquenessReport:
    distinguishability: float
    sup_xhat_gap: float
    sup_yhat_gap: float
    resonance_hausdorff: float
    identical_left: bool
    implication_pass: bool

    def to_json(self):
        return {
            "distinguishability": self.distinguishability,
            "sup_xhat_gap": self.sup_xhat_gap,
            "sup_yhat_gap": self.sup_yhat_gap,
            "resonance_hausdorff": self.resonance_hausdorff,
            "identical_left": self.identical_left,
            "implication_pass": self.implication_pass,
        }


def _hausdorff(z1, z2):
    if len(z1) == 0 and len(z2) == 0:
        return 0.0
    if len(z1) == 0 or len(z2) == 0:
        return float("inf")
    d = np.abs(np.asarray(z1)[:, None] - np.asarray(z2)[None, :])
    return float(max(np.max(np.min(d, axis=1)), np.max(np.min(d, axis=0))))


def uniqueness_report(truth_pair, radius: float) -> UniquenessReport:
    """Measure every distance the uniqueness statement says must co-vanish."""
    V1, V2 = truth_pair
    _check_shared_right(V1, V2)
    l1 = _split_parts(V1)[0]
    l2 = _split_parts(V2)[0]
    identical = l1.breakpoints == l2.breakpoints and l1.values == l2.values
    k_std = np.linspace(0.1, 20.0, 201)
    dist = distinguishability(V1, V2, k_std)
    kr = np.linspace(-radius, radius, 401)
    sup_x = float(np.max(np.abs(xhat(V1, kr) - xhat(V2, kr))))
    sup_y = float(np.max(np.abs(yhat(V1, kr) - yhat(V2, kr))))
    h = _hausdorff(resonances(V1, radius).locations,
                   resonances(V2, radius).locations)
    if identical:
        ok = dist < 1e-10 and sup_x < 1e-10 and sup_y < 1e-10 and h < 1e-10
    else:
        ok = dist > 1e-8
    return UniquenessReport(dist, sup_x, sup_y, h, identical, ok)


def write_loss_trace_csv(result: RecoveryResult, path):
    with open(path, "w") as fh:
        fh.write("iteration,loss\n")
        for i, v in enumerate(result.loss_trace):
            fh.write("%d,%.17g\n" % (i, v))
