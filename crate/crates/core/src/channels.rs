//! CPTP maps in Kraus form.

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, kron, DimList};
use crate::resources::CoherenceGenerator;
use crate::rng::Seed;
use crate::states::{self, DensityMatrix};
use crate::tol;
use crate::{CMatrix, Complex64};

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
}

/// Normalized Choi state `(id ⊗ Λ)(|Φ⁺⟩⟨Φ⁺|)` on `[d_in, d_out]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiState {
    pub state: DensityMatrix,
}

impl KrausChannel {
    /// Validates shapes and completeness `Σ K†K = I` within [`tol::CPTP`].
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Invalid("channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(Error::DimensionMismatch(
                "Kraus operators have inconsistent shapes".into(),
            ));
        }
        let ch = Self { kraus, d_in, d_out };
        let residual = ch.completeness_residual();
        if !(residual <= tol::CPTP) {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(ch)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `‖Σ K†K − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            sum = &sum + &k.adjoint().matmul(k);
        }
        sum.distance(&CMatrix::identity(self.d_in))
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(CMatrix::identity(d)).expect("identity is unitary")
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        let err = u.unitarity_error();
        if !u.is_square() || !(err <= tol::UNITARY) {
            return Err(Error::NotUnitary(err));
        }
        Self::new(vec![u])
    }

    /// Action on a bare operator of size `d_in`.
    pub fn map_operator(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = &out + &k.conjugate(x);
        }
        out
    }

    /// `self` after `first`: Kraus products `K_j L_i`.
    pub fn after(&self, first: &KrausChannel) -> Result<Self> {
        if first.d_out != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                self.d_in, self.d_out, first.d_in, first.d_out
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for k in &self.kraus {
            for l in &first.kraus {
                kraus.push(k.matmul(l));
            }
        }
        Ok(Self {
            kraus,
            d_in: first.d_in,
            d_out: self.d_out,
        })
    }

    /// Kraus operators read off the eigendecomposition of an unnormalized
    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`.
    pub fn from_choi_matrix(j: &CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if j.rows() != d_in * d_out || !j.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {}x{} for {d_in}→{d_out}",
                j.rows(),
                j.cols()
            )));
        }
        let eig = hermitian_eigen(j)?;
        let scale = eig.max().max(1.0);
        if eig.min() < -tol::PSD * scale {
            return Err(Error::NotPsd(eig.min()));
        }
        let mut kraus = Vec::new();
        for (k, &mu) in eig.eigenvalues.iter().enumerate() {
            if mu <= 1e-14 * scale {
                continue;
            }
            let v = eig.vector(k);
            let s = mu.sqrt();
            kraus.push(CMatrix::from_fn(d_out, d_in, |o, i| v[i * d_out + o] * s));
        }
        Self::new(kraus)
    }
}

pub fn make_channel(kraus: Vec<CMatrix>) -> Result<KrausChannel> {
    KrausChannel::new(kraus)
}

fn check_prob(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("{name} = {x} not in [0, 1]")));
    }
    Ok(())
}

/// Clock-and-shift operator `X^a Z^b` on a qudit.
fn weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    CMatrix::from_fn(d, d, |i, j| {
        if i == (j + a) % d {
            Complex64::from_polar(1.0, omega * ((b * j) % d) as f64)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// `ρ ↦ (1−p) ρ + p I/d`, as a Weyl-twirl Kraus set.
pub fn depolarizing(d: usize, p: f64) -> Result<KrausChannel> {
    check_prob("depolarizing p", p)?;
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be ≥ 1".into()));
    }
    let d2 = (d * d) as f64;
    let mut kraus = vec![CMatrix::identity(d).scale((1.0 - p + p / d2).sqrt())];
    if p > 0.0 {
        let w = (p / d2).sqrt();
        for a in 0..d {
            for b in 0..d {
                if (a, b) != (0, 0) {
                    kraus.push(weyl(d, a, b).scale(w));
                }
            }
        }
    }
    KrausChannel::new(kraus)
}

/// Scales off-diagonal elements in the generator eigenbasis by `1 − λ`.
pub fn dephasing(lambda: f64, basis: &CoherenceGenerator) -> Result<KrausChannel> {
    check_prob("dephasing λ", lambda)?;
    let d = basis.dim();
    let mut kraus = vec![CMatrix::identity(d).scale((1.0 - lambda).sqrt())];
    if lambda > 0.0 {
        for k in 0..d {
            kraus.push(CMatrix::outer(&basis.eigen().vector(k)).scale(lambda.sqrt()));
        }
    }
    KrausChannel::new(kraus)
}

/// Qubit amplitude damping towards `|0⟩` with decay probability `γ`.
pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    check_prob("amplitude damping γ", gamma)?;
    let k0 = CMatrix::from_diag(&[1.0, (1.0 - gamma).sqrt()]);
    let mut k1 = CMatrix::zeros(2, 2);
    k1[(0, 1)] = c(gamma.sqrt(), 0.0);
    KrausChannel::new(vec![k0, k1])
}

/// `X ↦ Tr(X) σ`.
pub fn replacement(d_in: usize, sigma: &DensityMatrix) -> Result<KrausChannel> {
    let eig = hermitian_eigen(sigma.matrix())?;
    let d_out = sigma.dim();
    let mut kraus = Vec::new();
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu <= 0.0 {
            continue;
        }
        let v = eig.vector(k);
        for i in 0..d_in {
            kraus.push(CMatrix::from_fn(d_out, d_in, |o, j| {
                if j == i {
                    v[o] * mu.sqrt()
                } else {
                    c(0.0, 0.0)
                }
            }));
        }
    }
    KrausChannel::new(kraus)
}

/// Channel whose Kraus operators are the `d_out × d_in` blocks of a
/// Haar-random isometry `d_in → d_out · kraus_rank`.
pub fn random_channel(
    d_in: usize,
    d_out: usize,
    kraus_rank: usize,
    seed: Seed,
) -> Result<KrausChannel> {
    if d_in == 0 || d_out == 0 || kraus_rank == 0 {
        return Err(Error::OutOfRange(
            "dimensions and Kraus rank must be ≥ 1".into(),
        ));
    }
    if d_out * kraus_rank < d_in {
        return Err(Error::OutOfRange(format!(
            "no isometry {d_in} → {d_out}·{kraus_rank}"
        )));
    }
    let v = states::haar_isometry(d_out * kraus_rank, d_in, &mut seed.rng());
    let kraus = (0..kraus_rank)
        .map(|k| CMatrix::from_fn(d_out, d_in, |o, i| v[(k * d_out + o, i)]))
        .collect();
    KrausChannel::new(kraus)
}

/// Group average `Σ_k U_k† Λ(U_k · U_k†) U_k / N` of a channel on
/// `d = dim H` over `U_k = exp(−iθ_k H)`, which is covariant under the
/// phase rotations generated by `H`. The finite grid is exact when all
/// eigenvalue gaps of `H` are integer multiples of a common quantum;
/// returns `None` otherwise.
pub fn covariant_twirl(ch: &KrausChannel, g: &CoherenceGenerator) -> Result<Option<KrausChannel>> {
    let d = g.dim();
    if ch.d_in != d || ch.d_out != d {
        return Err(Error::DimensionMismatch(format!(
            "twirl needs a {d} → {d} channel, got {} → {}",
            ch.d_in, ch.d_out
        )));
    }
    let ev = &g.eigen().eigenvalues;
    let gaps: Vec<f64> = ev
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&x| x > 1e-9)
        .collect();
    let quantum = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    if !quantum.is_finite() {
        return Ok(None);
    }
    let range = (ev[ev.len() - 1] - ev[0]) / quantum;
    let commensurate = ev
        .iter()
        .all(|l| ((l - ev[0]) / quantum - ((l - ev[0]) / quantum).round()).abs() < 1e-9);
    if !commensurate {
        return Ok(None);
    }
    // charges of |i⟩⟨j| ↦ |k⟩⟨l| terms are at most 2·range quanta
    let n = 2 * range.round() as usize + 1;
    let scale = (1.0 / n as f64).sqrt();
    let mut kraus = Vec::with_capacity(n * ch.kraus.len());
    for k in 0..n {
        let theta = std::f64::consts::TAU * k as f64 / (n as f64 * quantum);
        let u = g.eigen().map(|l| Complex64::from_polar(1.0, -theta * l));
        let ud = u.adjoint();
        for op in &ch.kraus {
            kraus.push((&(&ud * op) * &u).scale(scale));
        }
    }
    KrausChannel::new(kraus).map(Some)
}

/// Embeds `op` (acting on subsystem `target`) into the full tensor product.
pub(crate) fn embed(op: &CMatrix, dims: &DimList, target: usize) -> Result<CMatrix> {
    let left: usize = dims.as_slice()[..target].iter().product();
    let right: usize = dims.as_slice()[target + 1..].iter().product();
    kron(
        &kron(&CMatrix::identity(left), op)?,
        &CMatrix::identity(right),
    )
}

/// Applies `ch` to subsystem `target` of `rho`; the target's dimension
/// becomes `d_out`.
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix, target: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if target >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "target subsystem {target} of {}",
            dims.len()
        )));
    }
    if dims[target] != ch.d_in {
        return Err(Error::DimensionMismatch(format!(
            "channel input {} on subsystem of dimension {}",
            ch.d_in, dims[target]
        )));
    }
    let mut out_dims = dims.as_slice().to_vec();
    out_dims[target] = ch.d_out;
    let out_dims = DimList::new(out_dims)?;
    let n = out_dims.total();
    let mut out = CMatrix::zeros(n, n);
    for k in &ch.kraus {
        let big = embed(k, dims, target)?;
        out = &out + &big.conjugate(rho.matrix());
    }
    Ok(DensityMatrix::from_parts(out, out_dims))
}

/// Normalized Choi state of `ch`.
pub fn choi(ch: &KrausChannel) -> ChoiState {
    let phi = states::max_entangled(ch.d_in);
    let dims = DimList::new(vec![ch.d_in, ch.d_out]).expect("positive dims");
    let mut out = CMatrix::zeros(dims.total(), dims.total());
    for k in &ch.kraus {
        let big = kron(&CMatrix::identity(ch.d_in), k).expect("small dims");
        out = &out + &big.conjugate(phi.matrix());
    }
    ChoiState {
        state: DensityMatrix::from_parts(out, dims),
    }
}
