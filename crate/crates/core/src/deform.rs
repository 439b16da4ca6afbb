//! Genuine four-operator quadruples obtained by deforming a pseudo-bosonic
//! pair with two invertible maps:
//! `c = S a T^{-1}`, `s = S b T^{-1}`, `d = T b S^{-1}`, `r = T a S^{-1}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ecsusy::{ECSusyQuadruple, Su11Triple, TripleKind, Triples};
use crate::error::{Error, Result};
use crate::exactcoeff::{table_coefficient, FamilyKind, Parity, Table, TableRow};
use crate::fock::{identity_residual, FockVector, TruncatedOperator};
use crate::pseudoboson::{
    gram_deviation, quasi_basis_partial_sums, random_diagonal, PBPair, CONDITION_CAP,
};
use crate::su11families::ParityFamily;

/// Range of the random diagonal entries of `S` and `T`.
pub const DIAGONAL_RANGE: (f64, f64) = (0.5, 2.0);

#[derive(Clone, Debug)]
pub struct DeformationPair {
    s: TruncatedOperator,
    t: TruncatedOperator,
    s_inv: TruncatedOperator,
    t_inv: TruncatedOperator,
    cond_s: f64,
    cond_t: f64,
}

/// `phi~ = T phi_even`, `psi~ = T^{-dagger} psi_even`, `chi~ = S phi_odd`, `eta~ = S^{-dagger} psi_odd`.
#[derive(Clone, Debug)]
pub struct TiltedFamilies {
    pub phi: Vec<FockVector>,
    pub psi: Vec<FockVector>,
    pub chi: Vec<FockVector>,
    pub eta: Vec<FockVector>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TiltedEigenResiduals {
    pub k0_phi: f64,
    pub p0_psi: f64,
    pub l0_chi: f64,
    pub q0_eta: f64,
}

impl TiltedEigenResiduals {
    pub fn max(&self) -> f64 {
        self.k0_phi
            .max(self.p0_psi)
            .max(self.l0_chi)
            .max(self.q0_eta)
    }
}

/// One vector relation `op v_m = coefficient * target`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderCheck {
    pub relation: &'static str,
    pub m: u64,
    pub coefficient: f64,
    pub residual: f64,
}

impl DeformationPair {
    pub fn new(s: TruncatedOperator, t: TruncatedOperator) -> Result<Self> {
        if s.dim() != t.dim() {
            return Err(Error::DimensionMismatch {
                left: s.dim(),
                right: t.dim(),
            });
        }
        let cond_s = s.condition_number();
        let cond_t = t.condition_number();
        let s_inv = s.inverse(CONDITION_CAP)?;
        let t_inv = t.inverse(CONDITION_CAP)?;
        let id = TruncatedOperator::identity(s.dim())?;
        for (m, m_inv) in [(&s, &s_inv), (&t, &t_inv)] {
            let res = (m.entries() * m_inv.entries() - id.entries()).camax();
            if res > 1e-10 {
                return Err(Error::IllConditioned {
                    condition: m.condition_number(),
                    cap: CONDITION_CAP,
                });
            }
        }
        Ok(Self {
            s,
            t,
            s_inv,
            t_inv,
            cond_s,
            cond_t,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let id = TruncatedOperator::identity(dim)?;
        Self::new(id.clone(), id)
    }

    /// Independent diagonal `S`, `T` with entries uniform in [`DIAGONAL_RANGE`].
    pub fn random_diagonal(dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = DIAGONAL_RANGE;
        let s = random_diagonal(dim, lo, hi, &mut rng)?;
        let t = random_diagonal(dim, lo, hi, &mut rng)?;
        Self::new(s, t)
    }

    /// Random diagonal `T` and `S = lambda T`.
    pub fn proportional(dim: usize, lambda: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = DIAGONAL_RANGE;
        let t = random_diagonal(dim, lo, hi, &mut rng)?;
        Self::new(t.scale_real(lambda), t)
    }

    pub fn s(&self) -> &TruncatedOperator {
        &self.s
    }

    pub fn t(&self) -> &TruncatedOperator {
        &self.t
    }

    pub fn s_inv(&self) -> &TruncatedOperator {
        &self.s_inv
    }

    pub fn t_inv(&self) -> &TruncatedOperator {
        &self.t_inv
    }

    pub fn condition_numbers(&self) -> (f64, f64) {
        (self.cond_s, self.cond_t)
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `max |(X^{-1})^dagger - (X^dagger)^{-1}|` over `X = S, T`.
    pub fn adjoint_inverse_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (m, m_inv) in [(&self.s, &self.s_inv), (&self.t, &self.t_inv)] {
            let other = m.adjoint().inverse(CONDITION_CAP)?;
            worst = worst.max((m_inv.adjoint().entries() - other.entries()).camax());
        }
        Ok(worst)
    }
}

pub fn deform_quadruple(pair: &PBPair, def: &DeformationPair) -> Result<ECSusyQuadruple> {
    if pair.dim() != def.dim() {
        return Err(Error::DimensionMismatch {
            left: pair.dim(),
            right: def.dim(),
        });
    }
    let sandwich = |l: &TruncatedOperator, x: &TruncatedOperator, r: &TruncatedOperator| {
        l.compose(x)?.compose(r)
    };
    let c = sandwich(&def.s, &pair.a, &def.t_inv)?;
    let s = sandwich(&def.s, &pair.b, &def.t_inv)?;
    let d = sandwich(&def.t, &pair.b, &def.s_inv)?;
    let r = sandwich(&def.t, &pair.a, &def.s_inv)?;
    ECSusyQuadruple::new(d, c, r, s, -1.0, 1.0)
}

/// `k~ = T k T^{-1}`, `l~ = S l S^{-1}`, `p~ = T^{-dagger} p T^dagger`, `q~ = S^{-dagger} q S^dagger`.
pub fn tilted_triples(def: &DeformationPair, base: &Triples) -> Result<Triples> {
    let t_dag = def.t.adjoint();
    let s_dag = def.s.adjoint();
    let t_inv_dag = def.t_inv.adjoint();
    let s_inv_dag = def.s_inv.adjoint();
    Ok(Triples {
        k: base.k.conjugate_by(&def.t, &def.t_inv, TripleKind::K)?,
        l: base.l.conjugate_by(&def.s, &def.s_inv, TripleKind::L)?,
        p: base.p.conjugate_by(&t_inv_dag, &t_dag, TripleKind::P)?,
        q: base.q.conjugate_by(&s_inv_dag, &s_dag, TripleKind::Q)?,
    })
}

pub fn tilted_vectors(
    def: &DeformationPair,
    even: &ParityFamily,
    odd: &ParityFamily,
) -> Result<TiltedFamilies> {
    let t_inv_dag = def.t_inv.adjoint();
    let s_inv_dag = def.s_inv.adjoint();
    let map = |op: &TruncatedOperator, vs: Vec<FockVector>| -> Result<Vec<FockVector>> {
        vs.iter().map(|v| op.apply(v)).collect()
    };
    Ok(TiltedFamilies {
        phi: map(&def.t, even.phi_vectors())?,
        psi: map(&t_inv_dag, even.psi_vectors())?,
        chi: map(&def.s, odd.phi_vectors())?,
        eta: map(&s_inv_dag, odd.psi_vectors())?,
    })
}

fn scaled_max_residual(actual: &FockVector, expected: &FockVector) -> f64 {
    actual.sub(expected).max_abs() / expected.max_abs().max(1.0)
}

impl TiltedFamilies {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    fn lookup(&self, family: FamilyKind, parity: Parity, m: u64) -> Option<&FockVector> {
        let list = match (family, parity) {
            (FamilyKind::Phi, Parity::Even) => &self.phi,
            (FamilyKind::Psi, Parity::Even) => &self.psi,
            (FamilyKind::Phi, Parity::Odd) => &self.chi,
            (FamilyKind::Psi, Parity::Odd) => &self.eta,
        };
        list.get(m as usize)
    }

    /// `(<phi~_m, psi~_l> - delta, <chi~_m, eta~_l> - delta)`, maximized.
    pub fn pair_residuals(&self) -> (f64, f64) {
        (
            gram_deviation(&self.phi, &self.psi),
            gram_deviation(&self.chi, &self.eta),
        )
    }

    /// `max |<phi~_m, eta~_l>|` for `m, l <= limit`.
    pub fn cross_pairing(&self, limit: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for u in self.phi.iter().take(limit + 1) {
            for v in self.eta.iter().take(limit + 1) {
                worst = worst.max(u.inner(v).norm());
            }
        }
        worst
    }

    /// `(phi~_0, chi~_0, phi~_1, ...)` and `(psi~_0, eta~_0, psi~_1, ...)`.
    pub fn interleaved(&self) -> (Vec<FockVector>, Vec<FockVector>) {
        let mut big_phi = Vec::with_capacity(2 * self.len());
        let mut xi = Vec::with_capacity(2 * self.len());
        for m in 0..self.len() {
            big_phi.push(self.phi[m].clone());
            big_phi.push(self.chi[m].clone());
            xi.push(self.psi[m].clone());
            xi.push(self.eta[m].clone());
        }
        (big_phi, xi)
    }

    /// Deviation of the full interleaved partial sums from `<f, g>`, worst ordering.
    pub fn quasi_basis_deviation(&self, f: &FockVector, g: &FockVector) -> Result<f64> {
        let (big_phi, xi) = self.interleaved();
        let sums = quasi_basis_partial_sums(&big_phi, &xi, f, g, &[big_phi.len()])?;
        Ok(sums[0].deviation())
    }

    pub fn eigen_residuals(&self, tilted: &Triples) -> Result<TiltedEigenResiduals> {
        let check = |op: &TruncatedOperator, vs: &[FockVector], offset: f64| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for (m, v) in vs.iter().enumerate() {
                let q = m as f64 + offset;
                worst = worst.max(op.apply(v)?.sub(&v.scale_real(q)).norm() / v.norm());
            }
            Ok(worst)
        };
        Ok(TiltedEigenResiduals {
            k0_phi: check(&tilted.k.xzero, &self.phi, 0.25)?,
            p0_psi: check(&tilted.p.xzero, &self.psi, 0.25)?,
            l0_chi: check(&tilted.l.xzero, &self.chi, 0.75)?,
            q0_eta: check(&tilted.q.xzero, &self.eta, 0.75)?,
        })
    }

    fn relation_checks(
        &self,
        specs: &[(&'static str, &TruncatedOperator, Table, TableRow, Parity)],
        m_max: usize,
    ) -> Result<Vec<LadderCheck>> {
        if self.len() < m_max + 2 {
            return Err(Error::FamilyTooLong {
                requested: m_max + 2,
                limit: self.len(),
            });
        }
        let dim = self.phi[0].dim();
        let mut out = Vec::new();
        for &(relation, op, table, row, parity) in specs {
            for m in 0..=m_max as u64 {
                let entry = table_coefficient(table, row, parity, m)?;
                let source = self
                    .lookup(row.source(), parity, m)
                    .expect("range checked above");
                let c = entry.coefficient.value();
                let expected = match entry.target {
                    Some(label) => self
                        .lookup(label.family, label.parity, label.m)
                        .expect("targets stay within m_max + 1")
                        .scale_real(c),
                    None => FockVector::zeros(dim),
                };
                out.push(LadderCheck {
                    relation,
                    m,
                    coefficient: c,
                    residual: scaled_max_residual(&op.apply(source)?, &expected),
                });
            }
        }
        Ok(out)
    }
}

/// The eight tilted ladder relations; lowering below the bottom member must annihilate.
pub fn verify_tilted_ladder(
    tilted: &Triples,
    fams: &TiltedFamilies,
    m_max: usize,
) -> Result<Vec<LadderCheck>> {
    use Parity::{Even, Odd};
    use TableRow::{KMinus, KPlus, PMinus, PPlus};
    let rel = |t: &'_ Su11Triple| (t.xplus.clone(), t.xminus.clone());
    let (kp, km) = rel(&tilted.k);
    let (pp, pm) = rel(&tilted.p);
    let (lp, lm) = rel(&tilted.l);
    let (qp, qm) = rel(&tilted.q);
    fams.relation_checks(
        &[
            ("k~+ phi~", &kp, Table::Two, KPlus, Even),
            ("k~- phi~", &km, Table::Two, KMinus, Even),
            ("p~+ psi~", &pp, Table::Two, PPlus, Even),
            ("p~- psi~", &pm, Table::Two, PMinus, Even),
            ("l~+ chi~", &lp, Table::Two, KPlus, Odd),
            ("l~- chi~", &lm, Table::Two, KMinus, Odd),
            ("q~+ eta~", &qp, Table::Two, PPlus, Odd),
            ("q~- eta~", &qm, Table::Two, PMinus, Odd),
        ],
        m_max,
    )
}

/// How `c, d, r, s` and their adjoints move between the four tilted families.
pub fn verify_mapping_diagram(
    quad: &ECSusyQuadruple,
    fams: &TiltedFamilies,
    m_max: usize,
) -> Result<Vec<LadderCheck>> {
    use Parity::{Even, Odd};
    use TableRow::{ADag, BDag, A, B};
    let (rd, dd, cd, sd) = (
        quad.r.adjoint(),
        quad.d.adjoint(),
        quad.c.adjoint(),
        quad.s.adjoint(),
    );
    fams.relation_checks(
        &[
            ("s phi~", &quad.s, Table::One, B, Even),
            ("c phi~", &quad.c, Table::One, A, Even),
            ("r^dag psi~", &rd, Table::One, ADag, Even),
            ("d^dag psi~", &dd, Table::One, BDag, Even),
            ("d chi~", &quad.d, Table::One, B, Odd),
            ("r chi~", &quad.r, Table::One, A, Odd),
            ("c^dag eta~", &cd, Table::One, ADag, Odd),
            ("s^dag eta~", &sd, Table::One, BDag, Odd),
        ],
        m_max,
    )
}

/// Whether two quadruples have a genuinely distinct `c` and `r`.
pub fn c_differs_from_r(quad: &ECSusyQuadruple) -> Result<bool> {
    Ok(identity_residual(&quad.c, &quad.r)? > 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecsusy::{build_triples, verify_ecsusy};
    use crate::fock::{C64, DEFAULT_KERNEL_TOL};
    use crate::pseudoboson::{build_families, pb_pair_by_similarity, vacua};
    use crate::su11families::{build_even, build_odd, specialize};

    struct Fixture {
        pair: PBPair,
        even: ParityFamily,
        odd: ParityFamily,
    }

    fn fixture(pair: PBPair, m_max: usize) -> Fixture {
        let vac = vacua(&pair, DEFAULT_KERNEL_TOL).unwrap();
        let fam = build_families(&pair, &vac, 2 * m_max + 2).unwrap();
        let even = build_even(&pair, &fam, m_max).unwrap();
        let odd = build_odd(&pair, &fam, m_max).unwrap();
        Fixture { pair, even, odd }
    }

    fn low_vector(dim: usize, seed: u64) -> FockVector {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for z in v.iter_mut().take(8) {
            *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        FockVector::from_slice(&v).unwrap()
    }

    #[test]
    fn identity_deformation_is_the_specialization() {
        let pair = PBPair::complex_shifted(32, 0.5).unwrap();
        let quad = deform_quadruple(&pair, &DeformationPair::identity(32).unwrap()).unwrap();
        let spec = specialize(&pair).unwrap();
        assert_eq!(quad.c, spec.c);
        assert_eq!(quad.d, spec.d);
        assert_eq!(quad.r, spec.r);
        assert_eq!(quad.s, spec.s);
    }

    #[test]
    fn random_deformation_is_genuine() {
        let pair = PBPair::complex_shifted(64, 0.5).unwrap();
        let def = DeformationPair::random_diagonal(64, 7).unwrap();
        let (cs, ct) = def.condition_numbers();
        assert!(cs <= 4.0 && ct <= 4.0);
        assert!(def.adjoint_inverse_residual().unwrap() < 1e-14);
        let quad = deform_quadruple(&pair, &def).unwrap();
        assert!(verify_ecsusy(&quad).unwrap().max() < 1e-11);
        assert!(c_differs_from_r(&quad).unwrap());
        // triples of the deformed quadruple are the tilted ones
        let tilted =
            tilted_triples(&def, &build_triples(&specialize(&pair).unwrap()).unwrap()).unwrap();
        let direct = build_triples(&quad).unwrap();
        for (a, b) in tilted.iter().zip(direct.iter()) {
            assert!(identity_residual(&a.xplus, &b.xplus).unwrap() < 1e-12);
            assert!(identity_residual(&a.xzero, &b.xzero).unwrap() < 1e-12);
            assert!(a.commutator_residuals().unwrap().max() < 1e-10);
        }
        let cas = tilted.k.casimir().unwrap();
        assert!(cas.scalar_residual(-3.0 / 16.0).unwrap() < 1e-10);
    }

    #[test]
    fn singular_map_rejected() {
        let z = TruncatedOperator::zeros(4).unwrap();
        let id = TruncatedOperator::identity(4).unwrap();
        assert!(DeformationPair::new(z, id).is_err());
    }

    #[test]
    fn tilted_families_generic() {
        let fx = fixture(PBPair::complex_shifted(64, 0.5).unwrap(), 8);
        let def = DeformationPair::random_diagonal(64, 7).unwrap();
        let quad = deform_quadruple(&fx.pair, &def).unwrap();
        let tilted = tilted_triples(
            &def,
            &build_triples(&specialize(&fx.pair).unwrap()).unwrap(),
        )
        .unwrap();
        let fams = tilted_vectors(&def, &fx.even, &fx.odd).unwrap();
        assert!(fams.eigen_residuals(&tilted).unwrap().max() < 1e-10);
        let (a, b) = fams.pair_residuals();
        assert!(a < 1e-10 && b < 1e-10);
        assert!(fams.cross_pairing(6) > 1e-4);
        for c in verify_tilted_ladder(&tilted, &fams, 7).unwrap() {
            assert!(c.residual < 1e-10, "{c:?}");
        }
        let diagram = verify_mapping_diagram(&quad, &fams, 7).unwrap();
        for c in &diagram {
            assert!(c.residual < 1e-10, "{c:?}");
        }
        let c2 = diagram
            .iter()
            .find(|c| c.relation == "c phi~" && c.m == 2)
            .unwrap();
        assert!((c2.coefficient - 4.0 / 3.0).abs() < 1e-15);
        let f = low_vector(64, 1);
        let g = low_vector(64, 2);
        assert!(fams.quasi_basis_deviation(&f, &g).unwrap() > 1e-3);
    }

    #[test]
    fn proportional_maps_restore_quasi_basis() {
        let fx = fixture(PBPair::complex_shifted(64, 0.5).unwrap(), 14);
        let def = DeformationPair::proportional(64, 1.7, 3).unwrap();
        let fams = tilted_vectors(&def, &fx.even, &fx.odd).unwrap();
        let f = low_vector(64, 1);
        let g = low_vector(64, 2);
        assert!(fams.quasi_basis_deviation(&f, &g).unwrap() < 1e-9);
    }

    #[test]
    fn parity_preserving_pair_restores_quasi_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = random_diagonal(64, 0.5, 2.0, &mut rng).unwrap();
        let fx = fixture(pb_pair_by_similarity(&v).unwrap(), 14);
        let def = DeformationPair::random_diagonal(64, 7).unwrap();
        let fams = tilted_vectors(&def, &fx.even, &fx.odd).unwrap();
        assert_eq!(fams.cross_pairing(6), 0.0);
        let f = low_vector(64, 1);
        let g = low_vector(64, 2);
        assert!(fams.quasi_basis_deviation(&f, &g).unwrap() < 1e-9);
    }
}
