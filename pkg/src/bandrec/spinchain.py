"""Sector-restricted exact diagonalization of three 1D spin chains.

Models: the spin-1/2 exchange ring, its bond-alternating variant, and the
spin-1 ring with a single-ion (S^z)^2 term.  All conserve total S^z, so the
Hamiltonian acts inside one magnetization sector enumerated over base-d
digit codes.  The operator is applied matrix-free through precomputed
scatter tables (one injective index map per bond and hop direction), which
keeps memory linear in the sector dimension.

Antiperiodic boundary conditions flip the sign of the transverse part of
the boundary bond (S+_L S-_1 terms) and leave S^z_L S^z_1 unchanged.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import Twist, ValidationError
from .lanczos import LanczosConfig, lowest_eigenpair
from .riemann import SOURCE_EXACT_DIAG, EnergySeries


@dataclass(frozen=True)
class HeisenbergModel:
    """Uniform nearest-neighbour exchange ring of spin-1/2 sites."""

    J: float = 1.0

    kind = "heisenberg"
    local_dim = 2
    nu_hint = 1.0

    def bond_couplings(self, L: int) -> np.ndarray:
        return np.full(L, self.J)

    onsite_anisotropy = 0.0


@dataclass(frozen=True)
class DimerizedModel:
    """Spin-1/2 exchange ring with alternating bond strengths J*(1 -+ delta)."""

    J: float = 1.0
    delta: float = 0.0

    kind = "dimerized"
    local_dim = 2
    nu_hint = 3.0

    def __post_init__(self):
        if not abs(self.delta) < 1:
            raise ValidationError(f"|delta| must be < 1, got {self.delta}")

    def bond_couplings(self, L: int) -> np.ndarray:
        # bond b couples sites (b, b+1); alternation starts with 1 - delta
        signs = np.where(np.arange(L) % 2 == 0, -1.0, 1.0)
        return self.J * (1.0 + self.delta * signs)

    onsite_anisotropy = 0.0


@dataclass(frozen=True)
class SingleIonModel:
    """Spin-1 exchange ring with single-ion anisotropy J*D*(S^z)^2 per site."""

    J: float = 1.0
    D: float = 0.0

    kind = "single-ion"
    local_dim = 3
    nu_hint = 2.0

    def bond_couplings(self, L: int) -> np.ndarray:
        return np.full(L, self.J)

    @property
    def onsite_anisotropy(self) -> float:
        return self.J * self.D


SpinModel = HeisenbergModel | DimerizedModel | SingleIonModel


@dataclass(frozen=True)
class SpinModelSpec:
    """A spin model together with its physical boundary twist."""

    model: SpinModel
    boundary_twist: Twist = Twist.PBC


@dataclass(frozen=True)
class SectorBasis:
    """Ranked enumeration of the configurations with fixed total S^z.

    Configurations are encoded as base-`local_dim` integers whose digit at
    site i is the local level (0 .. d-1, level = m + s).  `states` is sorted
    ascending, so rank and unrank are mutual inverses via binary search.
    """

    L: int
    local_dim: int
    sz2_total: int  # twice the total S^z, always an integer
    states: np.ndarray

    @classmethod
    def build(cls, L: int, local_dim: int, sz2_total: int = 0) -> "SectorBasis":
        if L < 1:
            raise ValidationError("chain length must be >= 1")
        if local_dim not in (2, 3):
            raise ValidationError("local dimension must be 2 (spin-1/2) or 3 (spin-1)")
        target = sz2_total + L * (local_dim - 1)
        if target % 2:
            states = np.empty(0, dtype=np.int64)
        else:
            codes = np.arange(local_dim**L, dtype=np.int64)
            digit_sum = np.zeros_like(codes)
            tmp = codes.copy()
            for _ in range(L):
                digit_sum += tmp % local_dim
                tmp //= local_dim
            states = codes[2 * digit_sum == target]
        states.setflags(write=False)
        return cls(L=L, local_dim=local_dim, sz2_total=sz2_total, states=states)

    @property
    def sz_total(self) -> float:
        return self.sz2_total / 2.0

    @property
    def dim(self) -> int:
        return self.states.size

    def rank(self, code: int) -> int:
        idx = int(np.searchsorted(self.states, code))
        if idx >= self.dim or self.states[idx] != code:
            raise ValidationError(f"configuration {code} is not in the sector")
        return idx

    def unrank(self, index: int) -> int:
        return int(self.states[index])

    def digits(self, site: int) -> np.ndarray:
        """Local level of every basis state at one site."""
        return (self.states // self.local_dim**site) % self.local_dim


class SectorHamiltonian:
    """Matrix-free action of a spin Hamiltonian on one S^z sector."""

    def __init__(self, basis: SectorBasis, diag: np.ndarray, hops):
        self.basis = basis
        self.dim = basis.dim
        self._diag = diag
        self._hops = hops  # list of (dst_idx, src_idx, values) with unique dst per entry

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self._diag * x
        for dst, src, val in self._hops:
            y[dst] += val * x[src]
        return y

    __call__ = matvec

    def dense(self) -> np.ndarray:
        """Materialized matrix; intended for oracle checks on small sectors."""
        H = np.diag(self._diag)
        for dst, src, val in self._hops:
            H[dst, src] += val
        return H


def build_hamiltonian(
    spec: SpinModelSpec,
    L: int,
    sector: SectorBasis | None = None,
    twist_bond: int | None = None,
) -> SectorHamiltonian:
    """Assemble the sector-restricted Hamiltonian of one model.

    `twist_bond` selects which bond carries the antiperiodic sign (default:
    the boundary bond L-1); moving it is a gauge choice used only by tests.
    """
    model = spec.model
    if L < 2:
        raise ValidationError("chains below two sites are not supported")
    if sector is None:
        sector = SectorBasis.build(L, model.local_dim)
    if sector.L != L or sector.local_dim != model.local_dim:
        raise ValidationError(
            f"sector (L={sector.L}, d={sector.local_dim}) does not match "
            f"model (L={L}, d={model.local_dim})"
        )
    d = model.local_dim
    s2 = d - 1  # twice the site spin
    couplings = model.bond_couplings(L)
    if twist_bond is None:
        twist_bond = L - 1
    transverse_sign = np.ones(L)
    if spec.boundary_twist is Twist.ABC:
        transverse_sign[twist_bond] = -1.0

    digits = [sector.digits(i) for i in range(L)]
    m_vals = [(dig - s2 / 2.0) for dig in digits]  # S^z eigenvalue per site

    diag = np.zeros(sector.dim)
    for b in range(L):
        diag += couplings[b] * m_vals[b] * m_vals[(b + 1) % L]
    if model.onsite_anisotropy:
        for i in range(L):
            diag += model.onsite_anisotropy * m_vals[i] ** 2

    # ladder amplitudes: <level+1|S+|level> indexed by the source level
    spin = s2 / 2.0
    raise_amp = np.array(
        [math.sqrt(spin * (spin + 1) - (lvl - spin) * (lvl - spin + 1)) for lvl in range(d - 1)]
    )

    hops = []
    powers = [d**i for i in range(L)]
    for b in range(L):
        i, j = b, (b + 1) % L
        amp = 0.5 * couplings[b] * transverse_sign[b]
        for up_site, down_site in ((i, j), (j, i)):
            mask = (digits[up_site] < d - 1) & (digits[down_site] > 0)
            if not mask.any():
                continue
            src = np.nonzero(mask)[0]
            dst_codes = sector.states[src] + powers[up_site] - powers[down_site]
            dst = np.searchsorted(sector.states, dst_codes)
            val = amp * raise_amp[digits[up_site][src]] * raise_amp[digits[down_site][src] - 1]
            hops.append((dst.astype(np.intp), src.astype(np.intp), val))
    return SectorHamiltonian(sector, diag, hops)


@dataclass
class GroundStateResult:
    E0: float
    residual_norm: float
    degeneracy_warning: bool


_cache_lock = threading.Lock()
_ground_cache: dict = {}


def ground_energy(
    spec: SpinModelSpec, L: int, config: LanczosConfig | None = None
) -> GroundStateResult:
    """Lowest energy in the S^z = 0 sector (spin-1/2: even L only).

    Results are memoized per (model, twist, L, config); the Lanczos start
    vector is seeded, so repeated calls are bit-identical.
    """
    config = config or LanczosConfig()
    model = spec.model
    if model.local_dim == 2 and L % 2:
        raise ValidationError(
            f"odd sizes are excluded for spin-1/2 models (degenerate doublet), got L={L}"
        )
    key = (spec, L, config)
    with _cache_lock:
        if key in _ground_cache:
            return _ground_cache[key]
    basis = SectorBasis.build(L, model.local_dim)
    if basis.dim < 1:
        raise ValidationError(f"empty S^z=0 sector for L={L}")
    ham = build_hamiltonian(spec, L, basis)
    lanczos_result, _ = lowest_eigenpair(ham.matvec, ham.dim, config)
    result = GroundStateResult(
        E0=lanczos_result.energy,
        residual_norm=lanczos_result.residual_norm,
        degeneracy_warning=lanczos_result.degeneracy_warning,
    )
    with _cache_lock:
        _ground_cache[key] = result
    return result


def energy_series(
    model: SpinModel,
    sizes: Iterable[int],
    twists: Iterable[Twist] = (Twist.PBC,),
    config: LanczosConfig | None = None,
    nu: float | None = None,
) -> EnergySeries:
    """Ground-state energy series of one model over sizes and twists."""
    sizes = sorted(set(int(s) for s in sizes))
    twists = tuple(twists)
    if not sizes:
        raise ValidationError("no sizes requested")
    for L in sizes:
        if L < 2:
            raise ValidationError(f"sizes must be >= 2, got {L}")
        if model.local_dim == 2 and L % 2:
            raise ValidationError(
                f"spin-1/2 series are restricted to even sizes, got {L}"
            )
    series = EnergySeries(
        nu=model.nu_hint if nu is None else nu,
        source=SOURCE_EXACT_DIAG,
        model=model.kind,
    )
    for twist in twists:
        spec = SpinModelSpec(model, twist)
        for L in sizes:
            series.add(L, twist, ground_energy(spec, L, config).E0)
    return series
