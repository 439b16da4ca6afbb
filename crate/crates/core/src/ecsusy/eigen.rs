use super::Su11Triple;
use crate::error::{Error, Result};
use crate::fock::{commutator, FockVector, TruncatedOperator, C64};
use crate::pseudoboson::{gram_deviation, relative_distance, span_dual};

/// `||x v|| < ANNIHILATION_TOL * ||v||` counts as `x v = 0`.
pub const ANNIHILATION_TOL: f64 = 1e-8;
/// Complex tolerance for comparing `j` and `q` labels.
const LABEL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenMember {
    pub q: C64,
    pub vector: FockVector,
    /// `||x0 v - q v|| / ||v||`
    pub eigen_residual: f64,
    /// `||x^2 v - j(j+1) v|| / ||v||`
    pub casimir_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    /// The predicted coefficient `q - j` vanished after member `at`.
    VanishingCoefficient { at: usize },
    /// `x+` annihilated member `at`.
    Annihilated { at: usize },
}

#[derive(Clone, Debug)]
pub struct EigenFamily {
    pub j: C64,
    pub entries: Vec<EigenMember>,
    pub termination: Option<Termination>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JSolution {
    Unique(C64),
    /// Neither root satisfies `q0 + j = 0`.
    Ambiguous(C64, C64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumCase {
    /// Bounded below.
    Case1,
    /// Bounded above.
    Case2,
    /// Bounded on both sides.
    Case3,
    /// No bound found within the probe depth.
    Case4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumClass {
    pub case: SpectrumCase,
    /// Smallest `m` with `x-^m v_first = 0`.
    pub lower_witness: Option<usize>,
    /// Smallest `k` with `x+^k v_first = 0`.
    pub upper_witness: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualResiduals {
    pub biorthonormality: f64,
    /// `p0 psi_q = conj(q) psi_q`
    pub eigen: f64,
    /// `p+ psi_q = conj(q + 1 + j) psi_{q+1}`
    pub raising: f64,
    /// `p- psi_q = conj(q - 1 - j) psi_{q-1}`; the lowering target is `q - 1`.
    pub lowering: f64,
    /// `||p- psi_first|| / ||psi_first||`
    pub lowering_bottom: f64,
    /// `p^2 psi_q = conj(j(j+1)) psi_q`
    pub casimir: f64,
}

impl DualResiduals {
    pub fn max(&self) -> f64 {
        self.biorthonormality
            .max(self.eigen)
            .max(self.raising)
            .max(self.lowering)
            .max(self.casimir)
    }
}

#[derive(Clone, Debug)]
pub struct DualFamily {
    pub psi: Vec<FockVector>,
    pub residuals: DualResiduals,
}

fn casimir_operator(triple: &Su11Triple) -> Result<TruncatedOperator> {
    triple
        .xzero
        .compose(&triple.xzero)?
        .add(&triple.xzero)?
        .sub(&triple.xminus.compose(&triple.xplus)?)
}

fn rayleigh(op: &TruncatedOperator, v: &FockVector) -> Result<C64> {
    Ok(v.inner(&op.apply(v)?) / v.inner(v))
}

fn eigen_residual(op: &TruncatedOperator, v: &FockVector, value: C64) -> Result<f64> {
    Ok(op.apply(v)?.sub(&v.scale(value)).norm() / v.norm())
}

/// The root of `j(j+1) = lambda` compatible with `x- v0 = 0`, i.e. `q0 + j = 0`.
pub fn solve_j(lambda: C64, q0: C64) -> JSolution {
    let disc = (C64::new(1.0, 0.0) + lambda * 4.0).sqrt();
    let r1 = (C64::new(-1.0, 0.0) + disc) / 2.0;
    let r2 = (C64::new(-1.0, 0.0) - disc) / 2.0;
    let fits1 = (q0 + r1).norm() < LABEL_TOL;
    let fits2 = (q0 + r2).norm() < LABEL_TOL;
    match (fits1, fits2) {
        (true, _) => JSolution::Unique(r1),
        (false, true) => JSolution::Unique(r2),
        (false, false) => JSolution::Ambiguous(r1, r2),
    }
}

/// Ladder family from a lowest-weight vector (`x- v0 = 0`).
pub fn eigenfamily_from_lowest(
    triple: &Su11Triple,
    v0: &FockVector,
    count: usize,
) -> Result<EigenFamily> {
    let casimir = casimir_operator(triple)?;
    let lambda = rayleigh(&casimir, v0)?;
    let q0 = rayleigh(&triple.xzero, v0)?;
    for (operator, op, value) in [("x^2", &casimir, lambda), ("x0", &triple.xzero, q0)] {
        let residual = eigen_residual(op, v0, value)?;
        if residual > ANNIHILATION_TOL {
            return Err(Error::NotEigenvector { operator, residual });
        }
    }
    let lowered = triple.xminus.apply(v0)?.norm() / v0.norm();
    if lowered > ANNIHILATION_TOL {
        return Err(Error::InvalidArgument(format!(
            "seed is not annihilated by x- (relative norm {lowered:e}); supply q0 and j explicitly"
        )));
    }
    match solve_j(lambda, q0) {
        JSolution::Unique(j) => eigenfamily_from_seed(triple, v0, q0, j, count),
        JSolution::Ambiguous(r1, r2) => Err(Error::InvalidArgument(format!(
            "no root of j(j+1) = {lambda} matches q0 = {q0} (candidates {r1}, {r2})"
        ))),
    }
}

/// Ladder family `v_{q+1} = x+ v_q / (q - j)` from a seed with known labels.
pub fn eigenfamily_from_seed(
    triple: &Su11Triple,
    v0: &FockVector,
    q0: C64,
    j: C64,
    count: usize,
) -> Result<EigenFamily> {
    let casimir = casimir_operator(triple)?;
    let jj = j * (j + 1.0);
    let member = |q: C64, vector: FockVector| -> Result<EigenMember> {
        Ok(EigenMember {
            eigen_residual: eigen_residual(&triple.xzero, &vector, q)?,
            casimir_residual: eigen_residual(&casimir, &vector, jj)?,
            q,
            vector,
        })
    };
    let first = member(q0, v0.clone())?;
    if first.eigen_residual > ANNIHILATION_TOL {
        return Err(Error::NotEigenvector {
            operator: "x0",
            residual: first.eigen_residual,
        });
    }
    let mut entries = vec![first];
    let mut termination = None;
    while entries.len() < count {
        let last = entries.last().expect("family starts nonempty");
        let coeff = last.q - j;
        let at = entries.len() - 1;
        if coeff.norm() < LABEL_TOL {
            termination = Some(Termination::VanishingCoefficient { at });
            break;
        }
        let image = triple.xplus.apply(&last.vector)?;
        if image.norm() < ANNIHILATION_TOL * last.vector.norm() {
            termination = Some(Termination::Annihilated { at });
            break;
        }
        let next = image.scale(C64::new(1.0, 0.0) / coeff);
        let q = last.q + 1.0;
        entries.push(member(q, next)?);
    }
    Ok(EigenFamily {
        j,
        entries,
        termination,
    })
}

impl EigenFamily {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vectors(&self) -> Vec<FockVector> {
        self.entries.iter().map(|e| e.vector.clone()).collect()
    }

    pub fn max_eigen_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.eigen_residual)
            .fold(0.0, f64::max)
    }

    pub fn max_casimir_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.casimir_residual)
            .fold(0.0, f64::max)
    }

    /// Largest deviation of consecutive label gaps from 1.
    pub fn label_spacing_residual(&self) -> f64 {
        self.entries
            .windows(2)
            .map(|w| (w[1].q - w[0].q - 1.0).norm())
            .fold(0.0, f64::max)
    }
}

/// `max_v ||[x0, x- x+] v|| / ||v||` over the family members.
pub fn ladder_product_commutator_residual(
    triple: &Su11Triple,
    family: &EigenFamily,
) -> Result<f64> {
    let mp = triple.xminus.compose(&triple.xplus)?;
    let comm = commutator(&triple.xzero, &mp)?;
    let mut worst: f64 = 0.0;
    for e in &family.entries {
        worst = worst.max(comm.apply(&e.vector)?.norm() / e.vector.norm());
    }
    Ok(worst)
}

/// Number of steps until `op` annihilates the chain started at `v`, if that
/// happens before the chain reaches the last `guard` basis indices.
fn probe(
    op: &TruncatedOperator,
    start: &FockVector,
    depth: usize,
    guard: usize,
) -> Result<Option<usize>> {
    let dim = start.dim();
    let mut v = start.clone();
    for step in 1..=depth {
        if guard > 0 && v.tail_max_abs(dim.saturating_sub(guard)) > ANNIHILATION_TOL * v.max_abs() {
            // the next image would be shaped by the truncation, not the algebra
            return Ok(None);
        }
        let w = op.apply(&v)?;
        if w.norm() < ANNIHILATION_TOL * v.norm() {
            return Ok(Some(step));
        }
        v = w;
    }
    Ok(None)
}

/// Probes `x-` below the first member and `x+` above the last one.
///
/// Steps whose input has weight on the last `guard` indices are not trusted,
/// so a chain running into the truncation edge is never reported as bounded.
pub fn classify_spectrum(
    triple: &Su11Triple,
    family: &EigenFamily,
    probe_depth: usize,
    guard: usize,
) -> Result<SpectrumClass> {
    let first = family
        .entries
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty eigenfamily".into()))?;
    let last = family.entries.last().expect("nonempty");
    let lower = probe(&triple.xminus, &first.vector, probe_depth, guard)?;
    let upper =
        probe(&triple.xplus, &last.vector, probe_depth, guard)?.map(|k| k + family.len() - 1);
    let case = match (lower, upper) {
        (Some(_), Some(_)) => SpectrumCase::Case3,
        (Some(_), None) => SpectrumCase::Case1,
        (None, Some(_)) => SpectrumCase::Case2,
        (None, None) => SpectrumCase::Case4,
    };
    Ok(SpectrumClass {
        case,
        lower_witness: lower,
        upper_witness: upper,
    })
}

/// Biorthonormal partner of `family` inside its own span, with the ladder
/// relations of the adjoint triple checked on the result.
pub fn dual_family(triple_p: &Su11Triple, family: &EigenFamily) -> Result<DualFamily> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty eigenfamily".into()));
    }
    let phi = family.vectors();
    let psi = span_dual(&phi)?;
    let j = family.j;
    let jj = (j * (j + 1.0)).conj();
    let p2 = casimir_operator(triple_p)?;
    let mut r = DualResiduals {
        biorthonormality: gram_deviation(&phi, &psi),
        eigen: 0.0,
        raising: 0.0,
        lowering: 0.0,
        lowering_bottom: 0.0,
        casimir: 0.0,
    };
    for (i, e) in family.entries.iter().enumerate() {
        let q = e.q;
        let v = &psi[i];
        r.eigen = r.eigen.max(relative_distance(
            &triple_p.xzero.apply(v)?,
            &v.scale(q.conj()),
        ));
        r.casimir = r
            .casimir
            .max(relative_distance(&p2.apply(v)?, &v.scale(jj)));
        if i + 1 < psi.len() {
            let c = (q + 1.0 + j).conj();
            r.raising = r.raising.max(relative_distance(
                &triple_p.xplus.apply(v)?,
                &psi[i + 1].scale(c),
            ));
        }
        let lowered = triple_p.xminus.apply(v)?;
        if i == 0 {
            r.lowering_bottom = lowered.norm() / v.norm();
        } else {
            let c = (q - 1.0 - j).conj();
            r.lowering = r
                .lowering
                .max(relative_distance(&lowered, &psi[i - 1].scale(c)));
        }
    }
    Ok(DualFamily { psi, residuals: r })
}

#[cfg(test)]
mod tests {
    use super::super::{build_triples, ECSusyQuadruple, TripleKind};
    use super::*;
    use crate::fock::DEFAULT_KERNEL_TOL;
    use crate::pseudoboson::{build_families, pb_pair_by_similarity, vacua, PBPair};
    use nalgebra::DMatrix;

    fn close(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-12
    }

    /// Spin-`s` representation with `x0 = J3`, `x+ = J+`, `x- = -J-`.
    fn finite_toy(dim: usize) -> Su11Triple {
        let s = (dim as f64 - 1.0) / 2.0;
        let mut x0 = DMatrix::zeros(dim, dim);
        let mut xp = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let m = -s + i as f64;
            x0[(i, i)] = C64::new(m, 0.0);
            if i + 1 < dim {
                xp[(i + 1, i)] = C64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
            }
        }
        let xplus = TruncatedOperator::from_matrix(xp).unwrap();
        let xminus = xplus.adjoint().scale_real(-1.0);
        Su11Triple::new(
            xplus,
            xminus,
            TruncatedOperator::from_matrix(x0).unwrap(),
            TripleKind::K,
        )
        .unwrap()
    }

    fn dpb_setup(dim: usize, pair: PBPair) -> (super::super::Triples, FockVector) {
        let vac = vacua(&pair, DEFAULT_KERNEL_TOL).unwrap();
        let quad = ECSusyQuadruple::new(
            pair.b.clone(),
            pair.a.clone(),
            pair.a.clone(),
            pair.b,
            -1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(quad.dim(), dim);
        (build_triples(&quad).unwrap(), vac.phi0)
    }

    #[test]
    fn solve_j_examples() {
        assert_eq!(
            solve_j(C64::new(-3.0 / 16.0, 0.0), C64::new(0.25, 0.0)),
            JSolution::Unique(C64::new(-0.25, 0.0))
        );
        match solve_j(C64::new(0.0, 0.0), C64::new(0.0, 0.0)) {
            JSolution::Unique(j) => assert!(close(j, 0.0)),
            other => panic!("{other:?}"),
        }
        match solve_j(C64::new(-3.0 / 16.0, 0.0), C64::new(0.75, 0.0)) {
            JSolution::Unique(j) => assert!(close(j, -0.75)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            solve_j(C64::new(-3.0 / 16.0, 0.0), C64::new(2.0, 0.0)),
            JSolution::Ambiguous(..)
        ));
    }

    #[test]
    fn dpb_lowest_family() {
        let (t, phi0) = dpb_setup(64, PBPair::complex_shifted(64, 0.5).unwrap());
        let fam = eigenfamily_from_lowest(&t.k, &phi0, 10).unwrap();
        assert!(close(fam.j, -0.25) || (fam.j - C64::new(-0.25, 0.0)).norm() < 1e-10);
        assert!((fam.entries[0].q - C64::new(0.25, 0.0)).norm() < 1e-10);
        assert_eq!(fam.len(), 10);
        assert!(fam.termination.is_none());
        assert!(fam.max_eigen_residual() < 1e-10);
        assert!(fam.max_casimir_residual() < 1e-10);
        assert!(fam.label_spacing_residual() < 1e-8);
        assert!(ladder_product_commutator_residual(&t.k, &fam).unwrap() < 1e-10);
        let class = classify_spectrum(&t.k, &fam, 64, 2).unwrap();
        assert_eq!(class.case, SpectrumCase::Case1);
        assert_eq!(class.lower_witness, Some(1));
    }

    #[test]
    fn non_lowest_seed_rejected() {
        let (t, phi0) = dpb_setup(32, PBPair::canonical(32).unwrap());
        let up = t.k.xplus.apply(&phi0).unwrap();
        assert!(eigenfamily_from_lowest(&t.k, &up, 3).is_err());
        let not_eigen = phi0.add(&FockVector::basis(32, 1));
        assert!(matches!(
            eigenfamily_from_lowest(&t.k, &not_eigen, 3),
            Err(Error::NotEigenvector { .. })
        ));
    }

    #[test]
    fn truncation_edge_is_not_case_two() {
        let (t, phi0) = dpb_setup(32, PBPair::canonical(32).unwrap());
        // the family runs to the top of the truncated space
        let fam = eigenfamily_from_lowest(&t.k, &phi0, 16).unwrap();
        let class = classify_spectrum(&t.k, &fam, 64, 2).unwrap();
        assert_eq!(class.case, SpectrumCase::Case1);
        assert_eq!(class.upper_witness, None);
    }

    #[test]
    fn finite_toy_is_case_three() {
        let toy = finite_toy(5);
        assert!(toy.commutator_residuals().unwrap().max() < 1e-12);
        let fam = eigenfamily_from_lowest(&toy, &FockVector::basis(5, 0), 20).unwrap();
        assert_eq!(fam.len(), 5);
        assert!(fam.termination.is_some());
        let class = classify_spectrum(&toy, &fam, 10, 0).unwrap();
        assert_eq!(class.case, SpectrumCase::Case3);
        assert_eq!(class.lower_witness, Some(1));
        assert_eq!(class.upper_witness, Some(5));
        // direct check: x+^5 v0 = 0 while x+^4 v0 != 0
        let mut v = FockVector::basis(5, 0);
        for _ in 0..4 {
            v = toy.xplus.apply(&v).unwrap();
        }
        assert!(v.norm() > 1e-3);
        assert!(toy.xplus.apply(&v).unwrap().norm() < 1e-14);
    }

    #[test]
    fn dual_of_similarity_family() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let v = crate::pseudoboson::random_diagonal(64, 0.5, 2.0, &mut rng).unwrap();
        let pair = pb_pair_by_similarity(&v).unwrap();
        let vac = vacua(&pair, DEFAULT_KERNEL_TOL).unwrap();
        let pbf = build_families(&pair, &vac, 16).unwrap();
        let (t, phi0) = dpb_setup(64, pair);
        let fam = eigenfamily_from_lowest(&t.k, &phi0, 8).unwrap();
        let dual = dual_family(&t.p, &fam).unwrap();
        assert!(dual.residuals.max() < 1e-10, "{:?}", dual.residuals);
        assert!(dual.residuals.lowering_bottom < 1e-10);
        // closed form: psi_m = Psi_{2m} / even_norm(m)
        for m in 0..8u64 {
            let expected =
                pbf.psi[2 * m as usize].scale_real(1.0 / crate::exactcoeff::even_norm(m).value());
            assert!(dual.psi[m as usize].distance(&expected) < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn dependent_family_is_rank_deficient() {
        let (t, phi0) = dpb_setup(16, PBPair::canonical(16).unwrap());
        let mut fam = eigenfamily_from_lowest(&t.k, &phi0, 3).unwrap();
        let dup = fam.entries[0].clone();
        fam.entries.push(dup);
        assert!(matches!(dual_family(&t.p, &fam), Err(Error::RankDeficient)));
    }
}
