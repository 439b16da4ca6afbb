//! D-pseudo-bosonic pairs `(a, b)` with `[a, b] = 1`, their vacua and the
//! biorthonormal families `phi_n = b^n phi_0 / sqrt(n!)`,
//! `Psi_n = (a^dagger)^n Psi_0 / sqrt(n!)`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fock::{
    bosonic_annihilator, commutator, leading_block_residual, nullspace, FockVector,
    TruncatedOperator, C64,
};

/// Largest condition number accepted for similarity and deformation maps.
pub const CONDITION_CAP: f64 = 1e8;

#[derive(Clone, Debug)]
pub struct PBPair {
    pub a: TruncatedOperator,
    pub b: TruncatedOperator,
}

#[derive(Clone, Debug)]
pub struct Vacua {
    pub phi0: FockVector,
    pub psi0: FockVector,
}

#[derive(Clone, Debug)]
pub struct PBFamilies {
    pub phi: Vec<FockVector>,
    pub psi: Vec<FockVector>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PbCheck {
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Residuals of the four lowering/raising relations, maximized over `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderResiduals {
    pub b_on_phi: f64,
    pub a_on_phi: f64,
    pub adag_on_psi: f64,
    pub bdag_on_psi: f64,
}

impl LadderResiduals {
    pub fn max(&self) -> f64 {
        self.b_on_phi
            .max(self.a_on_phi)
            .max(self.adag_on_psi)
            .max(self.bdag_on_psi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialSum {
    pub cutoff: usize,
    /// `sum_n <f, phi_n> <Psi_n, g>`
    pub phi_psi: C64,
    /// `sum_n <f, Psi_n> <phi_n, g>`
    pub psi_phi: C64,
    /// `<f, g>`
    pub target: C64,
}

impl PartialSum {
    pub fn deviation(&self) -> f64 {
        (self.phi_psi - self.target)
            .norm()
            .max((self.psi_phi - self.target).norm())
    }
}

/// `||actual - expected|| / max(1, ||expected||)`.
pub fn relative_distance(actual: &FockVector, expected: &FockVector) -> f64 {
    actual.sub(expected).norm() / expected.norm().max(1.0)
}

/// Diagonal operator with entries drawn uniformly from `[lo, hi]`.
pub fn random_diagonal<R: Rng>(
    dim: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<TruncatedOperator> {
    let values: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random_range(lo..=hi), 0.0))
        .collect();
    TruncatedOperator::diagonal(&values)
}

impl PBPair {
    pub fn new(a: TruncatedOperator, b: TruncatedOperator) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        Ok(Self { a, b })
    }

    /// The ordinary bosonic pair `(c_0, c_0^dagger)`.
    pub fn canonical(dim: usize) -> Result<Self> {
        let c0 = bosonic_annihilator(dim)?;
        let c0_dag = c0.adjoint();
        Self::new(c0, c0_dag)
    }

    /// `a = c_0 - i alpha / sqrt 2`, `b = c_0^dagger - i alpha / sqrt 2`: the
    /// matrix form of conjugating the bosonic pair by an imaginary translation.
    pub fn complex_shifted(dim: usize, alpha: f64) -> Result<Self> {
        let shift = C64::new(0.0, -alpha / 2f64.sqrt());
        let c0 = bosonic_annihilator(dim)?;
        let c0_dag = c0.adjoint();
        Self::new(c0.shift(shift), c0_dag.shift(shift))
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Number-like operator `N = b a`.
    pub fn number(&self) -> Result<TruncatedOperator> {
        self.b.compose(&self.a)
    }

    /// `(b^dagger, a^dagger)`: the pair that raises and lowers the `Psi_n`.
    pub fn dual(&self) -> Self {
        Self {
            a: self.b.adjoint(),
            b: self.a.adjoint(),
        }
    }
}

/// `a = V c_0 V^{-1}`, `b = V c_0^dagger V^{-1}`.
pub fn pb_pair_by_similarity(v: &TruncatedOperator) -> Result<PBPair> {
    let v_inv = v.inverse(CONDITION_CAP)?;
    let c0 = bosonic_annihilator(v.dim())?;
    let a = v.compose(&c0)?.compose(&v_inv)?;
    let b = v.compose(&c0.adjoint())?.compose(&v_inv)?;
    PBPair::new(a, b)
}

/// Guard-block residual of `[a, b] - 1` with guard 2.
pub fn check_pb(pair: &PBPair, tolerance: f64) -> Result<PbCheck> {
    let comm = commutator(&pair.a, &pair.b)?;
    let id = TruncatedOperator::identity(pair.dim())?;
    let residual = leading_block_residual(&comm, &id, 2)?;
    Ok(PbCheck {
        residual,
        tolerance,
        passed: residual <= tolerance,
    })
}

fn single_kernel_vector(
    op: &TruncatedOperator,
    tol: f64,
    name: &'static str,
) -> Result<FockVector> {
    let mut ker = nullspace(op, tol)?;
    match ker.len() {
        0 => Err(Error::EmptyKernel { operator: name }),
        1 => Ok(ker.remove(0)),
        dimension => Err(Error::DegenerateKernel {
            operator: name,
            dimension,
        }),
    }
}

/// Vacua `a phi_0 = 0`, `b^dagger Psi_0 = 0`, scaled so that `<phi_0, Psi_0> = 1`.
///
/// The remaining gauge is fixed by `||phi_0|| = ||Psi_0||` and by making the
/// first non-negligible coordinate of `phi_0` real and positive.
pub fn vacua(pair: &PBPair, tol: f64) -> Result<Vacua> {
    let u = single_kernel_vector(&pair.a, tol, "a")?;
    let w = single_kernel_vector(&pair.b.adjoint(), tol, "b^dagger")?;
    let pairing = u.inner(&w);
    if pairing.norm() < 1e-12 {
        return Err(Error::VanishingPairing(pairing.norm()));
    }
    let top = u.max_abs();
    let lead = u
        .coords()
        .iter()
        .find(|z| z.norm() >= 1e-8 * top)
        .copied()
        .expect("kernel vectors are nonzero");
    let phase = C64::from_polar(1.0, -lead.arg());
    let lambda = phase * (1.0 / pairing.norm().sqrt());
    let mu = C64::new(1.0, 0.0) / (lambda.conj() * pairing);
    Ok(Vacua {
        phi0: u.scale(lambda),
        psi0: w.scale(mu),
    })
}

/// Default family length for dimension `dim`.
pub fn default_n_max(dim: usize) -> usize {
    dim / 4
}

/// `phi_n` and `Psi_n` for `n = 0..=n_max`.
pub fn build_families(pair: &PBPair, vacua: &Vacua, n_max: usize) -> Result<PBFamilies> {
    let limit = pair.dim().saturating_sub(2);
    if n_max > limit {
        return Err(Error::FamilyTooLong {
            requested: n_max,
            limit,
        });
    }
    let a_dag = pair.a.adjoint();
    let mut phi = vec![vacua.phi0.clone()];
    let mut psi = vec![vacua.psi0.clone()];
    for n in 1..=n_max {
        let norm = 1.0 / (n as f64).sqrt();
        phi.push(pair.b.apply(&phi[n - 1])?.scale_real(norm));
        psi.push(a_dag.apply(&psi[n - 1])?.scale_real(norm));
    }
    Ok(PBFamilies { phi, psi })
}

impl PBFamilies {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// `max_{n,m} |<phi_n, Psi_m> - delta_{nm}|`.
    pub fn biorthonormality_residual(&self) -> f64 {
        gram_deviation(&self.phi, &self.psi)
    }
}

/// Gram matrices beyond this condition number are treated as rank deficient.
const GRAM_CONDITION_CAP: f64 = 1e12;

/// The unique family inside `span(vectors)` biorthonormal to `vectors`:
/// the columns of `F (F^dagger F)^{-1}`.
pub fn span_dual(vectors: &[FockVector]) -> Result<Vec<FockVector>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let cols: Vec<_> = vectors.iter().map(|v| v.coords().clone()).collect();
    let f = DMatrix::from_columns(&cols);
    let gram = f.adjoint() * &f;
    let sv = gram.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smin <= 0.0 || smax / smin > GRAM_CONDITION_CAP {
        return Err(Error::RankDeficient);
    }
    let gram_inv = gram.try_inverse().ok_or(Error::RankDeficient)?;
    let g = f * gram_inv;
    (0..vectors.len())
        .map(|i| FockVector::new(g.column(i).into_owned()))
        .collect()
}

/// `max_{k,l} |<left_k, right_l> - delta_{kl}|`.
pub fn gram_deviation(left: &[FockVector], right: &[FockVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, u) in left.iter().enumerate() {
        for (l, v) in right.iter().enumerate() {
            let expected = if k == l { 1.0 } else { 0.0 };
            worst = worst.max((u.inner(v) - C64::new(expected, 0.0)).norm());
        }
    }
    worst
}

pub fn ladder_residuals(pair: &PBPair, families: &PBFamilies) -> Result<LadderResiduals> {
    let a_dag = pair.a.adjoint();
    let b_dag = pair.b.adjoint();
    let mut out = LadderResiduals {
        b_on_phi: 0.0,
        a_on_phi: 0.0,
        adag_on_psi: 0.0,
        bdag_on_psi: 0.0,
    };
    let len = families.len();
    for n in 0..len {
        let phi = &families.phi[n];
        let psi = &families.psi[n];
        let a_phi = pair.a.apply(phi)?;
        let bd_psi = b_dag.apply(psi)?;
        if n == 0 {
            out.a_on_phi = out.a_on_phi.max(a_phi.norm() / phi.norm());
            out.bdag_on_psi = out.bdag_on_psi.max(bd_psi.norm() / psi.norm());
        } else {
            let s = (n as f64).sqrt();
            out.a_on_phi = out.a_on_phi.max(relative_distance(
                &a_phi,
                &families.phi[n - 1].scale_real(s),
            ));
            out.bdag_on_psi = out.bdag_on_psi.max(relative_distance(
                &bd_psi,
                &families.psi[n - 1].scale_real(s),
            ));
        }
        if n + 1 < len {
            let s = ((n + 1) as f64).sqrt();
            out.b_on_phi = out.b_on_phi.max(relative_distance(
                &pair.b.apply(phi)?,
                &families.phi[n + 1].scale_real(s),
            ));
            out.adag_on_psi = out.adag_on_psi.max(relative_distance(
                &a_dag.apply(psi)?,
                &families.psi[n + 1].scale_real(s),
            ));
        }
    }
    Ok(out)
}

/// `max_n ||N phi_n - n phi_n|| / ||phi_n||` and the same for `N^dagger` on `Psi_n`.
pub fn number_residuals(pair: &PBPair, families: &PBFamilies) -> Result<(f64, f64)> {
    let number = pair.number()?;
    let number_dag = number.adjoint();
    let mut phi_res: f64 = 0.0;
    let mut psi_res: f64 = 0.0;
    for (n, (phi, psi)) in families.phi.iter().zip(&families.psi).enumerate() {
        let nf = n as f64;
        phi_res = phi_res.max(number.apply(phi)?.sub(&phi.scale_real(nf)).norm() / phi.norm());
        psi_res = psi_res.max(number_dag.apply(psi)?.sub(&psi.scale_real(nf)).norm() / psi.norm());
    }
    Ok((phi_res, psi_res))
}

/// Partial sums of both resolutions of the identity at each cutoff (number of terms).
pub fn quasi_basis_partial_sums(
    phi: &[FockVector],
    psi: &[FockVector],
    f: &FockVector,
    g: &FockVector,
    cutoffs: &[usize],
) -> Result<Vec<PartialSum>> {
    if phi.len() != psi.len() {
        return Err(Error::DimensionMismatch {
            left: phi.len(),
            right: psi.len(),
        });
    }
    let target = f.inner(g);
    cutoffs
        .iter()
        .map(|&cutoff| {
            if cutoff > phi.len() {
                return Err(Error::FamilyTooLong {
                    requested: cutoff,
                    limit: phi.len(),
                });
            }
            let mut phi_psi = C64::new(0.0, 0.0);
            let mut psi_phi = C64::new(0.0, 0.0);
            for n in 0..cutoff {
                phi_psi += f.inner(&phi[n]) * psi[n].inner(g);
                psi_phi += f.inner(&psi[n]) * phi[n].inner(g);
            }
            Ok(PartialSum {
                cutoff,
                phi_psi,
                psi_phi,
                target,
            })
        })
        .collect()
}
