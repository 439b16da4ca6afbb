//! Closed-form ladder coefficients for the even/odd `j = -1/4` families and an
//! independent route that derives the same numbers from the Fock ladder.
//!
//! Family members, written over the pseudo-bosonic vectors `phi_n`, `Psi_n`:
//!
//! | family    | vector                        |
//! |-----------|-------------------------------|
//! | phi, even | `even_norm(m) * phi_{2m}`     |
//! | phi, odd  | `odd_norm(m)  * phi_{2m+1}`   |
//! | psi, even | `Psi_{2m}   / even_norm(m)`   |
//! | psi, odd  | `Psi_{2m+1} / odd_norm(m)`    |

use std::fmt;

use super::{even_norm, odd_norm, RadicalRational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableRow {
    A,
    B,
    ADag,
    BDag,
    K0,
    KPlus,
    KMinus,
    P0,
    PPlus,
    PMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Phi,
    Psi,
}

/// A family member `phi_{-1/4, m + 1/4}` (even) or `phi_{-1/4, m + 3/4}` (odd), or its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TargetLabel {
    pub family: FamilyKind,
    pub parity: Parity,
    pub m: u64,
}

/// A printed table form whose Fock index or family disagrees with the ladder algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintedMisprint {
    pub printed: &'static str,
    pub consistent: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub coefficient: RadicalRational,
    /// `None` when the image vanishes (lowering below the bottom of the family).
    pub target: Option<TargetLabel>,
    pub misprint: Option<PrintedMisprint>,
}

impl TableRow {
    pub const TABLE_ONE: [TableRow; 4] = [TableRow::A, TableRow::B, TableRow::ADag, TableRow::BDag];
    pub const TABLE_TWO: [TableRow; 6] = [
        TableRow::K0,
        TableRow::KPlus,
        TableRow::KMinus,
        TableRow::P0,
        TableRow::PPlus,
        TableRow::PMinus,
    ];

    pub fn table(self) -> Table {
        match self {
            TableRow::A | TableRow::B | TableRow::ADag | TableRow::BDag => Table::One,
            _ => Table::Two,
        }
    }

    /// Family the row's operator acts on.
    pub fn source(self) -> FamilyKind {
        match self {
            TableRow::A | TableRow::B | TableRow::K0 | TableRow::KPlus | TableRow::KMinus => {
                FamilyKind::Phi
            }
            _ => FamilyKind::Psi,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableRow::A => "a",
            TableRow::B => "b",
            TableRow::ADag => "a_dag",
            TableRow::BDag => "b_dag",
            TableRow::K0 => "k0",
            TableRow::KPlus => "k_plus",
            TableRow::KMinus => "k_minus",
            TableRow::P0 => "p0",
            TableRow::PPlus => "p_plus",
            TableRow::PMinus => "p_minus",
        }
    }
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    /// Fock index carried by member `m`.
    pub fn fock_index(self, m: u64) -> u64 {
        match self {
            Parity::Even => 2 * m,
            Parity::Odd => 2 * m + 1,
        }
    }
}

impl fmt::Display for TargetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            FamilyKind::Phi => "phi",
            FamilyKind::Psi => "psi",
        };
        let quarter = match self.parity {
            Parity::Even => 1,
            Parity::Odd => 3,
        };
        write!(f, "{fam}(-1/4, {}+{quarter}/4)", self.m)
    }
}

fn label(family: FamilyKind, parity: Parity, m: i64) -> Option<TargetLabel> {
    (m >= 0).then_some(TargetLabel {
        family,
        parity,
        m: m as u64,
    })
}

fn ratio(num: i64, den: i64) -> RadicalRational {
    RadicalRational::from_ratio(num, den)
}

/// Closed-form coefficient and target of `row` acting on member `m` of the
/// `parity` family, in the ladder-consistent reading of the tables.
pub fn table_coefficient(
    table: Table,
    row: TableRow,
    parity: Parity,
    m: u64,
) -> Result<TableEntry> {
    if row.table() != table {
        return Err(Error::InvalidArgument(format!(
            "row {} does not belong to table {:?}",
            row.name(),
            table
        )));
    }
    use FamilyKind::{Phi, Psi};
    use Parity::{Even, Odd};
    let mi = m as i64;
    let (coefficient, target) = match (row, parity) {
        (TableRow::A, Even) => (ratio(2 * mi, 2 * mi - 1), label(Phi, Odd, mi - 1)),
        (TableRow::A, Odd) => (ratio(2 * mi + 1, 1), label(Phi, Even, mi)),
        (TableRow::B, Even) => (ratio(1, 1), label(Phi, Odd, mi)),
        (TableRow::B, Odd) => (ratio(2 * mi + 1, 1), label(Phi, Even, mi + 1)),
        (TableRow::ADag, Even) => (ratio(2 * mi + 1, 1), label(Psi, Odd, mi)),
        (TableRow::ADag, Odd) => (ratio(2 * mi + 2, 2 * mi + 1), label(Psi, Even, mi + 1)),
        (TableRow::BDag, Even) => (ratio(2 * mi - 1, 1), label(Psi, Odd, mi - 1)),
        (TableRow::BDag, Odd) => (ratio(1, 1), label(Psi, Even, mi)),
        (TableRow::K0, Even) => (ratio(4 * mi + 1, 4), label(Phi, Even, mi)),
        (TableRow::K0, Odd) => (ratio(4 * mi + 3, 4), label(Phi, Odd, mi)),
        (TableRow::KPlus, Even) => (ratio(2 * mi + 1, 2), label(Phi, Even, mi + 1)),
        (TableRow::KPlus, Odd) => (ratio(2 * mi + 1, 2), label(Phi, Odd, mi + 1)),
        (TableRow::KMinus, Even) => (ratio(mi, 1), label(Phi, Even, mi - 1)),
        (TableRow::KMinus, Odd) => (
            ratio(mi * (2 * mi + 1), 2 * mi - 1),
            label(Phi, Odd, mi - 1),
        ),
        (TableRow::P0, Even) => (ratio(4 * mi + 1, 4), label(Psi, Even, mi)),
        (TableRow::P0, Odd) => (ratio(4 * mi + 3, 4), label(Psi, Odd, mi)),
        (TableRow::PPlus, Even) => (ratio(mi + 1, 1), label(Psi, Even, mi + 1)),
        (TableRow::PPlus, Odd) => (
            ratio((mi + 1) * (2 * mi + 3), 2 * mi + 1),
            label(Psi, Odd, mi + 1),
        ),
        (TableRow::PMinus, Even) => (ratio(2 * mi - 1, 2), label(Psi, Even, mi - 1)),
        (TableRow::PMinus, Odd) => (ratio(2 * mi - 1, 2), label(Psi, Odd, mi - 1)),
    };
    let misprint = match (row, parity) {
        (TableRow::BDag, Even) => Some(PrintedMisprint {
            printed: "b_dag psi(-1/4, m+1/4) = (2m-1)!!/sqrt((2m-1)!) psi_{2m+1}",
            consistent: "b_dag psi(-1/4, m+1/4) = (2m-1)!!/sqrt((2m-1)!) psi_{2m-1}",
        }),
        (TableRow::ADag, Odd) => Some(PrintedMisprint {
            printed: "a_dag psi(-1/4, m+3/4) = (2m+2)/(2m+1) phi(-1/4, m+5/4)",
            consistent: "a_dag psi(-1/4, m+3/4) = (2m+2)/(2m+1) psi(-1/4, m+5/4)",
        }),
        _ => None,
    };
    Ok(match target {
        Some(t) => TableEntry {
            coefficient,
            target: Some(t),
            misprint,
        },
        None => TableEntry {
            coefficient: RadicalRational::zero(),
            target: None,
            misprint,
        },
    })
}

/// Every (row, parity) pair of both tables, in a fixed order.
pub fn table_entries() -> Vec<(Table, TableRow, Parity)> {
    let mut out = Vec::new();
    for row in TableRow::TABLE_ONE {
        for parity in [Parity::Even, Parity::Odd] {
            out.push((Table::One, row, parity));
        }
    }
    for row in TableRow::TABLE_TWO {
        for parity in [Parity::Even, Parity::Odd] {
            out.push((Table::Two, row, parity));
        }
    }
    out
}

fn member_scale(family: FamilyKind, parity: Parity, m: u64) -> RadicalRational {
    let norm = match parity {
        Parity::Even => even_norm(m),
        Parity::Odd => odd_norm(m),
    };
    match family {
        FamilyKind::Phi => norm,
        FamilyKind::Psi => RadicalRational::one() / norm,
    }
}

/// Action of a row's operator on a single Fock-indexed vector `phi_n` or `Psi_n`:
/// `(weight, new index)`, or `None` when the vector is annihilated.
fn fock_action(row: TableRow, n: u64) -> Option<(RadicalRational, u64)> {
    let sqrt = RadicalRational::sqrt_of_integer;
    let half = RadicalRational::from_ratio(1, 2);
    match row {
        // a phi_n = sqrt(n) phi_{n-1};  b^dag Psi_n = sqrt(n) Psi_{n-1}
        TableRow::A | TableRow::BDag => (n >= 1).then(|| (sqrt(n), n - 1)),
        // b phi_n = sqrt(n+1) phi_{n+1};  a^dag Psi_n = sqrt(n+1) Psi_{n+1}
        TableRow::B | TableRow::ADag => Some((sqrt(n + 1), n + 1)),
        // (N + 1/2)/2 and its adjoint
        TableRow::K0 | TableRow::P0 => Some((RadicalRational::from_ratio(2 * n as i64 + 1, 4), n)),
        // b^2/2 and (a^dag)^2/2
        TableRow::KPlus | TableRow::PPlus => Some((half * sqrt((n + 1) * (n + 2)), n + 2)),
        // a^2/2 and (b^dag)^2/2
        TableRow::KMinus | TableRow::PMinus => (n >= 2).then(|| (half * sqrt(n * (n - 1)), n - 2)),
    }
}

/// Coefficient and target derived from the family normalizations and the
/// Fock-basis ladder action, without reference to the closed forms.
pub fn fock_route_coefficient(row: TableRow, parity: Parity, m: u64) -> TableEntry {
    let family = row.source();
    let n = parity.fock_index(m);
    match fock_action(row, n) {
        None => TableEntry {
            coefficient: RadicalRational::zero(),
            target: None,
            misprint: None,
        },
        Some((weight, n_out)) => {
            let (t_parity, t_m) = if n_out % 2 == 0 {
                (Parity::Even, n_out / 2)
            } else {
                (Parity::Odd, (n_out - 1) / 2)
            };
            let coefficient =
                member_scale(family, parity, m) * weight / member_scale(family, t_parity, t_m);
            TableEntry {
                coefficient,
                target: Some(TargetLabel {
                    family,
                    parity: t_parity,
                    m: t_m,
                }),
                misprint: None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let e = table_coefficient(Table::Two, TableRow::KPlus, Parity::Even, 0).unwrap();
        assert_eq!(e.coefficient, RadicalRational::from_ratio(1, 2));
        assert_eq!(
            e.target,
            Some(TargetLabel {
                family: FamilyKind::Phi,
                parity: Parity::Even,
                m: 1
            })
        );
        let e = table_coefficient(Table::Two, TableRow::KMinus, Parity::Odd, 2).unwrap();
        assert_eq!(e.coefficient, RadicalRational::from_ratio(10, 3));
        let e = table_coefficient(Table::One, TableRow::A, Parity::Even, 1).unwrap();
        assert_eq!(e.coefficient, RadicalRational::from_integer(2));
        assert_eq!(
            e.target,
            Some(TargetLabel {
                family: FamilyKind::Phi,
                parity: Parity::Odd,
                m: 0
            })
        );
    }

    #[test]
    fn lowering_below_bottom_is_zero() {
        for row in [
            TableRow::A,
            TableRow::BDag,
            TableRow::KMinus,
            TableRow::PMinus,
        ] {
            let e = table_coefficient(row.table(), row, Parity::Even, 0).unwrap();
            assert!(
                e.coefficient.is_zero() && e.target.is_none(),
                "{}",
                row.name()
            );
        }
        let e = table_coefficient(Table::Two, TableRow::PMinus, Parity::Odd, 0).unwrap();
        assert!(e.coefficient.is_zero());
    }

    #[test]
    fn unknown_row_rejected() {
        assert!(table_coefficient(Table::One, TableRow::K0, Parity::Even, 0).is_err());
        assert!(table_coefficient(Table::Two, TableRow::A, Parity::Odd, 3).is_err());
    }

    #[test]
    fn closed_forms_match_fock_route() {
        for (table, row, parity) in table_entries() {
            for m in 0..=30 {
                let closed = table_coefficient(table, row, parity, m).unwrap();
                let route = fock_route_coefficient(row, parity, m);
                assert_eq!(
                    closed.coefficient,
                    route.coefficient,
                    "{} {:?} m={m}",
                    row.name(),
                    parity
                );
                assert_eq!(
                    closed.target,
                    route.target,
                    "{} {:?} m={m}",
                    row.name(),
                    parity
                );
            }
        }
    }

    #[test]
    fn exactly_two_misprints() {
        let flagged: Vec<_> = table_entries()
            .into_iter()
            .filter(|&(t, r, p)| table_coefficient(t, r, p, 0).unwrap().misprint.is_some())
            .collect();
        assert_eq!(
            flagged,
            vec![
                (Table::One, TableRow::ADag, Parity::Odd),
                (Table::One, TableRow::BDag, Parity::Even)
            ]
        );
    }
}
