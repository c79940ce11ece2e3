use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::psd_power;
use crate::states::DensityMatrix;
use crate::CMatrix;

/// Eigenvalues of `ρ_A` at or below this are treated as outside its support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// The `A → C` channel induced by a bipartite state:
///
/// `Λ(X) = Tr_A[(M Xᵀ M ⊗ I_C) ρ_AC] + Tr[X (I − Πᵀ)] ρ_C`
///
/// with `M = ρ_A^{−1/2}` on the support `Π` of `ρ_A` (pseudo-inverse) and
/// the transpose taken in the computational basis of `A`. The second term
/// replaces inputs outside the support by `ρ_C`, keeping the map trace
/// preserving for rank-deficient `ρ_A`.
pub fn induced_transfer_channel(rho_ac: &DensityMatrix) -> Result<KrausChannel> {
    let dims = rho_ac.dims().as_slice();
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "induced channel needs a bipartite state, got dims {dims:?}"
        )));
    }
    let (da, dc) = (dims[0], dims[1]);
    let rho_a = rho_ac.marginal(&[0])?;
    let rho_c = rho_ac.marginal(&[1])?;
    let m = psd_power(rho_a.matrix(), -0.5, SUPPORT_CUTOFF)?;
    let support = psd_power(rho_a.matrix(), 0.0, SUPPORT_CUTOFF)?;
    let off_support = &CMatrix::identity(da) - &support;
    let r = rho_ac.matrix();

    // Λ(|i⟩⟨j|), assembled into the unnormalized Choi matrix Σ |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)
    let mut choi = CMatrix::zeros(da * dc, da * dc);
    for i in 0..da {
        for j in 0..da {
            // Y = M |j⟩⟨i| M, Y[a,b] = M[a,j] M[i,b]
            let mut out = CMatrix::zeros(dc, dc);
            for a in 0..da {
                for b in 0..da {
                    let y = m[(a, j)] * m[(i, b)];
                    if y.norm() == 0.0 {
                        continue;
                    }
                    // Tr_A[(Y ⊗ I) ρ] = Σ_ab Y[a,b] ⟨b|ρ|a⟩_A
                    for x in 0..dc {
                        for z in 0..dc {
                            out[(x, z)] += y * r[(b * dc + x, a * dc + z)];
                        }
                    }
                }
            }
            let w = off_support[(i, j)];
            if w.norm() > 0.0 {
                out = &out + &rho_c.matrix().scale_c(w);
            }
            for x in 0..dc {
                for z in 0..dc {
                    choi[(i * dc + x, j * dc + z)] = out[(x, z)];
                }
            }
        }
    }
    KrausChannel::from_choi_matrix(&choi.hermitian_part(), da, dc)
}
