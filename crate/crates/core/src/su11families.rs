//! The pseudo-bosonic specialization `c = r = a`, `d = s = b`, `delta = -gamma = 1`.
//!
//! Here `k = l = (b^2/2, a^2/2, (ba + 1/2)/2)` and the spectrum of `k0` splits
//! into an even ladder `m + 1/4` built on `phi_{2m}` and an odd ladder `m + 3/4`
//! built on `phi_{2m+1}`, each with its own biorthonormal partner.

use std::fmt;

use nalgebra::DMatrix;

use crate::ecsusy::{build_triples, ECSusyQuadruple, Triples};
use crate::error::{Error, Result};
use crate::exactcoeff::{
    even_norm, fock_route_coefficient, odd_norm, table_coefficient, table_entries, tilde_psi_ratio,
    FamilyKind, Parity, PrintedMisprint, Table, TableRow, TargetLabel,
};
use crate::fock::{FockVector, TruncatedOperator};
use crate::pseudoboson::{
    gram_deviation, quasi_basis_partial_sums, relative_distance, span_dual, PBFamilies, PBPair,
};

/// The Casimir label shared by both parity ladders.
pub const J_LABEL: f64 = -0.25;
/// The Casimir value `j(j+1)` at `j = -1/4`.
pub const CASIMIR_VALUE: f64 = -3.0 / 16.0;

#[derive(Clone, Debug)]
pub struct IndexedVector {
    pub m: u64,
    pub parity: Parity,
    pub vector: FockVector,
}

impl IndexedVector {
    pub fn j(&self) -> f64 {
        J_LABEL
    }

    /// `m + 1/4` (even) or `m + 3/4` (odd).
    pub fn q(&self) -> f64 {
        match self.parity {
            Parity::Even => self.m as f64 + 0.25,
            Parity::Odd => self.m as f64 + 0.75,
        }
    }
}

impl fmt::Display for IndexedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let off = match self.parity {
            Parity::Even => "1/4",
            Parity::Odd => "3/4",
        };
        write!(f, "(-1/4, {}+{off})", self.m)
    }
}

/// One parity ladder with its biorthonormal partner.
#[derive(Clone, Debug)]
pub struct ParityFamily {
    pub parity: Parity,
    pub phi: Vec<IndexedVector>,
    pub psi: Vec<IndexedVector>,
    /// Distance of the constructed vectors from the closed forms in terms of `phi_n`, `Psi_n`.
    pub closed_form_residual: f64,
    /// Distance of `psi` from the dual computed inside `span(phi)`; `None` if that
    /// solve failed. Only parity-preserving pairs make the two coincide.
    pub span_dual_residual: Option<f64>,
}

impl ParityFamily {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi_vectors(&self) -> Vec<FockVector> {
        self.phi.iter().map(|v| v.vector.clone()).collect()
    }

    pub fn psi_vectors(&self) -> Vec<FockVector> {
        self.psi.iter().map(|v| v.vector.clone()).collect()
    }

    pub fn biorthonormality_residual(&self) -> f64 {
        gram_deviation(&self.phi_vectors(), &self.psi_vectors())
    }

    fn vector(&self, kind: FamilyKind, m: u64) -> Option<&FockVector> {
        let list = match kind {
            FamilyKind::Phi => &self.phi,
            FamilyKind::Psi => &self.psi,
        };
        list.get(m as usize).map(|v| &v.vector)
    }
}

/// One (row, parity, m) cell of the two action tables.
#[derive(Clone, Debug)]
pub struct TableCheck {
    pub table: Table,
    pub row: TableRow,
    pub parity: Parity,
    pub m: u64,
    pub coefficient: f64,
    pub target: Option<TargetLabel>,
    /// `max|op v - coefficient * target| / max(1, max|coefficient * target|)`.
    pub float_residual: f64,
    /// Closed-form coefficient equals the Fock-route coefficient exactly.
    pub exact_match: bool,
    pub misprint: Option<PrintedMisprint>,
}

#[derive(Clone, Debug)]
pub struct Interleaved {
    pub big_phi: Vec<FockVector>,
    pub xi: Vec<FockVector>,
    pub pairing_residual: f64,
}

/// `c = r = a`, `d = s = b`, `gamma = -1`, `delta = 1`.
pub fn specialize(pair: &PBPair) -> Result<ECSusyQuadruple> {
    ECSusyQuadruple::new(
        pair.b.clone(),
        pair.a.clone(),
        pair.a.clone(),
        pair.b.clone(),
        -1.0,
        1.0,
    )
}

fn check_range(families: &PBFamilies, m_max: usize) -> Result<()> {
    let n_max = families.len().saturating_sub(1);
    if 2 * m_max + 2 > n_max {
        return Err(Error::FamilyTooLong {
            requested: 2 * m_max + 2,
            limit: n_max,
        });
    }
    Ok(())
}

fn indexed(parity: Parity, vectors: Vec<FockVector>) -> Vec<IndexedVector> {
    vectors
        .into_iter()
        .enumerate()
        .map(|(m, vector)| IndexedVector {
            m: m as u64,
            parity,
            vector,
        })
        .collect()
}

fn span_dual_distance(phi: &[FockVector], psi: &[FockVector]) -> Option<f64> {
    let dual = span_dual(phi).ok()?;
    Some(
        dual.iter()
            .zip(psi)
            .map(|(u, v)| relative_distance(u, v))
            .fold(0.0, f64::max),
    )
}

/// Even ladder by repeated `k+`, normalized by the ladder coefficients `m + 1/2`;
/// the partner is `Psi_{2m} / even_norm(m)`.
pub fn build_even(pair: &PBPair, families: &PBFamilies, m_max: usize) -> Result<ParityFamily> {
    check_range(families, m_max)?;
    let triples = build_triples(&specialize(pair)?)?;
    let mut phi = vec![families.phi[0].clone()];
    for m in 0..m_max {
        let next = triples.k.xplus.apply(&phi[m])?;
        phi.push(next.scale_real(1.0 / (m as f64 + 0.5)));
    }
    let mut psi = Vec::with_capacity(m_max + 1);
    let mut closed: f64 = 0.0;
    for (m, v) in phi.iter().enumerate() {
        let e = even_norm(m as u64).value();
        closed = closed.max(relative_distance(v, &families.phi[2 * m].scale_real(e)));
        psi.push(families.psi[2 * m].scale_real(1.0 / e));
    }
    let span_dual_residual = span_dual_distance(&phi, &psi);
    Ok(ParityFamily {
        parity: Parity::Even,
        phi: indexed(Parity::Even, phi),
        psi: indexed(Parity::Even, psi),
        closed_form_residual: closed,
        span_dual_residual,
    })
}

/// Odd ladder `b phi_even(m)` with partner `a^dagger psi_even(m) / (2m + 1)`.
pub fn build_odd(pair: &PBPair, families: &PBFamilies, m_max: usize) -> Result<ParityFamily> {
    let even = build_even(pair, families, m_max)?;
    let a_dag = pair.a.adjoint();
    let mut phi = Vec::with_capacity(m_max + 1);
    let mut psi = Vec::with_capacity(m_max + 1);
    let mut closed: f64 = 0.0;
    for m in 0..=m_max {
        let v = pair.b.apply(&even.phi[m].vector)?;
        let w = a_dag
            .apply(&even.psi[m].vector)?
            .scale_real(1.0 / (2 * m + 1) as f64);
        let o = odd_norm(m as u64).value();
        closed = closed
            .max(relative_distance(
                &v,
                &families.phi[2 * m + 1].scale_real(o),
            ))
            .max(relative_distance(
                &w,
                &families.psi[2 * m + 1].scale_real(1.0 / o),
            ));
        phi.push(v);
        psi.push(w);
    }
    let span_dual_residual = span_dual_distance(&phi, &psi);
    Ok(ParityFamily {
        parity: Parity::Odd,
        phi: indexed(Parity::Odd, phi),
        psi: indexed(Parity::Odd, psi),
        closed_form_residual: closed,
        span_dual_residual,
    })
}

fn row_operator<'a>(
    row: TableRow,
    pair: &'a PBPair,
    adjoints: &'a (TruncatedOperator, TruncatedOperator),
    t: &'a Triples,
) -> &'a TruncatedOperator {
    match row {
        TableRow::A => &pair.a,
        TableRow::B => &pair.b,
        TableRow::ADag => &adjoints.0,
        TableRow::BDag => &adjoints.1,
        TableRow::K0 => &t.k.xzero,
        TableRow::KPlus => &t.k.xplus,
        TableRow::KMinus => &t.k.xminus,
        TableRow::P0 => &t.p.xzero,
        TableRow::PPlus => &t.p.xplus,
        TableRow::PMinus => &t.p.xminus,
    }
}

fn scaled_max_residual(actual: &FockVector, expected: &FockVector) -> f64 {
    actual.sub(expected).max_abs() / expected.max_abs().max(1.0)
}

/// Every table cell for `m = 0..=m_max`, in the fixed order of [`table_entries`].
///
/// Raising rows at `m_max` need member `m_max + 1`, so `even` and `odd` must be
/// one longer than `m_max`.
pub fn verify_tables(
    pair: &PBPair,
    even: &ParityFamily,
    odd: &ParityFamily,
    m_max: usize,
) -> Result<Vec<TableCheck>> {
    if even.len() < m_max + 2 || odd.len() < m_max + 2 {
        return Err(Error::FamilyTooLong {
            requested: m_max + 2,
            limit: even.len().min(odd.len()),
        });
    }
    let triples = build_triples(&specialize(pair)?)?;
    let adjoints = (pair.a.adjoint(), pair.b.adjoint());
    let dim = pair.dim();
    let mut out = Vec::new();
    for (table, row, parity) in table_entries() {
        let op = row_operator(row, pair, &adjoints, &triples);
        let family = match parity {
            Parity::Even => even,
            Parity::Odd => odd,
        };
        for m in 0..=m_max as u64 {
            let entry = table_coefficient(table, row, parity, m)?;
            let oracle = fock_route_coefficient(row, parity, m);
            let source = family.vector(row.source(), m).expect("range checked above");
            let image = op.apply(source)?;
            let c = entry.coefficient.value();
            let expected = match &entry.target {
                Some(label) => {
                    let fam = match label.parity {
                        Parity::Even => even,
                        Parity::Odd => odd,
                    };
                    fam.vector(label.family, label.m)
                        .expect("targets stay within m_max + 1")
                        .scale_real(c)
                }
                None => FockVector::zeros(dim),
            };
            out.push(TableCheck {
                table,
                row,
                parity,
                m,
                coefficient: c,
                target: entry.target,
                float_residual: scaled_max_residual(&image, &expected),
                exact_match: entry.coefficient == oracle.coefficient
                    && entry.target == oracle.target,
                misprint: entry.misprint,
            });
        }
    }
    Ok(out)
}

/// `Phi_{2j} = phi_even(j)`, `Phi_{2j+1} = phi_odd(j)`, and likewise `xi` from the partners.
pub fn interleave(even: &ParityFamily, odd: &ParityFamily) -> Result<Interleaved> {
    if even.len() != odd.len() {
        return Err(Error::DimensionMismatch {
            left: even.len(),
            right: odd.len(),
        });
    }
    let mut big_phi = Vec::with_capacity(2 * even.len());
    let mut xi = Vec::with_capacity(2 * even.len());
    for (e, o) in even.phi.iter().zip(&odd.phi) {
        big_phi.push(e.vector.clone());
        big_phi.push(o.vector.clone());
    }
    for (e, o) in even.psi.iter().zip(&odd.psi) {
        xi.push(e.vector.clone());
        xi.push(o.vector.clone());
    }
    let pairing_residual = gram_deviation(&big_phi, &xi);
    Ok(Interleaved {
        big_phi,
        xi,
        pairing_residual,
    })
}

impl Interleaved {
    /// Largest difference between the interleaved partial sums and the
    /// `phi_n`/`Psi_n` partial sums at the same number of terms.
    pub fn partial_sum_agreement(
        &self,
        families: &PBFamilies,
        f: &FockVector,
        g: &FockVector,
    ) -> Result<f64> {
        let cutoff = self.big_phi.len().min(families.len());
        let ours = quasi_basis_partial_sums(&self.big_phi, &self.xi, f, g, &[cutoff])?;
        let base = quasi_basis_partial_sums(&families.phi, &families.psi, f, g, &[cutoff])?;
        Ok((ours[0].phi_psi - base[0].phi_psi)
            .norm()
            .max((ours[0].psi_phi - base[0].psi_phi).norm()))
    }
}

/// `(2m)! / ((2m-1)!!)^2 * psi_even(m)`: the partner normalized by the `p`
/// ladder instead of by biorthonormality.
pub fn tilde_psi(psi_even: &IndexedVector) -> FockVector {
    psi_even
        .vector
        .scale_real(tilde_psi_ratio(psi_even.m).value())
}

/// Largest coordinate of the wrong parity; zero for parity-preserving pairs.
pub fn parity_leak(vectors: &[IndexedVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for v in vectors {
        let skip = match v.parity {
            Parity::Even => 1,
            Parity::Odd => 0,
        };
        for i in (skip..v.vector.dim()).step_by(2) {
            worst = worst.max(v.vector.get(i).norm());
        }
    }
    worst
}

/// `max_m ||b a phi_odd(m) - (2m+1) phi_odd(m)|| / ||phi_odd(m)||`.
pub fn odd_number_chain_residual(pair: &PBPair, odd: &ParityFamily) -> Result<f64> {
    let number = pair.number()?;
    let mut worst: f64 = 0.0;
    for v in &odd.phi {
        let expected = v.vector.scale_real((2 * v.m + 1) as f64);
        worst = worst.max(number.apply(&v.vector)?.sub(&expected).norm() / v.vector.norm());
    }
    Ok(worst)
}

/// Whether `span(even) ∩ span(odd) = {0}`, by a rank test on the joined columns.
pub fn spans_intersect_trivially(even: &[FockVector], odd: &[FockVector]) -> bool {
    let cols: Vec<_> = even.iter().chain(odd).map(|v| v.coords().clone()).collect();
    if cols.is_empty() {
        return true;
    }
    let joined = DMatrix::from_columns(&cols);
    let sv = joined.singular_values();
    let cutoff = 1e-10 * sv.max();
    sv.iter().filter(|&&s| s > cutoff).count() == cols.len()
}
