//! Extended coupled SUSY quadruples `(d, c, r, s)` and their four deformed
//! su(1,1) triples.
//!
//! Every identity is checked on the leading block of the truncated matrices,
//! excluding as many trailing indices as the expression's total bandwidth.

mod eigen;
mod intertwining;

pub use eigen::{
    classify_spectrum, dual_family, eigenfamily_from_lowest, eigenfamily_from_seed,
    ladder_product_commutator_residual, solve_j, DualFamily, DualResiduals, EigenFamily,
    EigenMember, JSolution, SpectrumCase, SpectrumClass, Termination, ANNIHILATION_TOL,
};
pub use intertwining::{half_shift_residuals, verify_intertwining, HalfShiftResiduals, Relation};

use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{bosonic_annihilator, commutator, identity_residual, TruncatedOperator};

#[derive(Clone, Debug)]
pub struct ECSusyQuadruple {
    pub d: TruncatedOperator,
    pub c: TruncatedOperator,
    pub r: TruncatedOperator,
    pub s: TruncatedOperator,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripleKind {
    K,
    L,
    P,
    Q,
    ClassicK,
}

impl TripleKind {
    pub fn name(self) -> &'static str {
        match self {
            TripleKind::K => "k",
            TripleKind::L => "l",
            TripleKind::P => "p",
            TripleKind::Q => "q",
            TripleKind::ClassicK => "classic-K",
        }
    }
}

impl fmt::Display for TripleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(x+, x-, x0)` expected to satisfy `[x0, x±] = ±x±`, `[x+, x-] = -2 x0`.
#[derive(Clone, Debug)]
pub struct Su11Triple {
    pub xplus: TruncatedOperator,
    pub xminus: TruncatedOperator,
    pub xzero: TruncatedOperator,
    pub kind: TripleKind,
}

#[derive(Clone, Debug)]
pub struct Triples {
    pub k: Su11Triple,
    pub l: Su11Triple,
    pub p: Su11Triple,
    pub q: Su11Triple,
}

impl Triples {
    pub fn iter(&self) -> impl Iterator<Item = &Su11Triple> {
        [&self.k, &self.l, &self.p, &self.q].into_iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EcsusyResiduals {
    /// `dc - rs - gamma`
    pub first: f64,
    /// `cd - sr - delta`
    pub second: f64,
}

impl EcsusyResiduals {
    pub fn max(&self) -> f64 {
        self.first.max(self.second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorResiduals {
    pub zero_plus: f64,
    pub zero_minus: f64,
    pub plus_minus: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.zero_plus.max(self.zero_minus).max(self.plus_minus)
    }
}

#[derive(Clone, Debug)]
pub struct Casimir {
    pub operator: TruncatedOperator,
    /// Largest pairwise disagreement between the three equivalent forms.
    pub form_residual: f64,
    /// `max_alpha` of the guard-block size of `[x^2, x_alpha]`.
    pub centrality_residual: f64,
}

/// The classic pair `a = b = c_0` with `gamma = -1`, `delta = 1`.
#[derive(Clone, Debug)]
pub struct CSusy {
    pub a: TruncatedOperator,
    pub b: TruncatedOperator,
    pub gamma: f64,
    pub delta: f64,
}

fn check_constants(gamma: f64, delta: f64) -> Result<()> {
    if !(gamma.is_finite() && delta.is_finite()) || delta <= gamma {
        return Err(Error::InvalidConstants { gamma, delta });
    }
    Ok(())
}

impl ECSusyQuadruple {
    pub fn new(
        d: TruncatedOperator,
        c: TruncatedOperator,
        r: TruncatedOperator,
        s: TruncatedOperator,
        gamma: f64,
        delta: f64,
    ) -> Result<Self> {
        check_constants(gamma, delta)?;
        for op in [&c, &r, &s] {
            if op.dim() != d.dim() {
                return Err(Error::DimensionMismatch {
                    left: d.dim(),
                    right: op.dim(),
                });
            }
        }
        Ok(Self {
            d,
            c,
            r,
            s,
            gamma,
            delta,
        })
    }

    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    fn spread(&self) -> f64 {
        self.delta - self.gamma
    }
}

impl CSusy {
    pub fn from_boson(dim: usize) -> Result<Self> {
        if dim < 4 {
            return Err(Error::InvalidDimension(dim));
        }
        let c0 = bosonic_annihilator(dim)?;
        Ok(Self {
            a: c0.clone(),
            b: c0,
            gamma: -1.0,
            delta: 1.0,
        })
    }

    /// Residuals of `a^dagger a = b b^dagger + gamma` and `a a^dagger = b^dagger b + delta`.
    pub fn residuals(&self) -> Result<EcsusyResiduals> {
        let a_dag = self.a.adjoint();
        let b_dag = self.b.adjoint();
        let first = identity_residual(
            &a_dag.compose(&self.a)?,
            &self.b.compose(&b_dag)?.shift_real(self.gamma),
        )?;
        let second = identity_residual(
            &self.a.compose(&a_dag)?,
            &b_dag.compose(&self.b)?.shift_real(self.delta),
        )?;
        Ok(EcsusyResiduals { first, second })
    }

    /// `K+ = a^dagger b^dagger / (delta - gamma)`, `K- = b a / (delta - gamma)`,
    /// `K0 = (a^dagger a - gamma/2) / (delta - gamma)`.
    pub fn classic_triple(&self) -> Result<Su11Triple> {
        let w = 1.0 / (self.delta - self.gamma);
        let a_dag = self.a.adjoint();
        Ok(Su11Triple {
            xplus: a_dag.compose(&self.b.adjoint())?.scale_real(w),
            xminus: self.b.compose(&self.a)?.scale_real(w),
            xzero: a_dag
                .compose(&self.a)?
                .shift_real(-self.gamma / 2.0)
                .scale_real(w),
            kind: TripleKind::ClassicK,
        })
    }

    /// The same data as a quadruple: `(d, c, r, s) = (a^dagger, a, b, b^dagger)`.
    pub fn as_quadruple(&self) -> Result<ECSusyQuadruple> {
        ECSusyQuadruple::new(
            self.a.adjoint(),
            self.a.clone(),
            self.b.clone(),
            self.b.adjoint(),
            self.gamma,
            self.delta,
        )
    }
}

pub fn csusy_from_boson(dim: usize) -> Result<CSusy> {
    CSusy::from_boson(dim)
}

pub fn verify_ecsusy(quad: &ECSusyQuadruple) -> Result<EcsusyResiduals> {
    check_constants(quad.gamma, quad.delta)?;
    let first = identity_residual(
        &quad.d.compose(&quad.c)?,
        &quad.r.compose(&quad.s)?.shift_real(quad.gamma),
    )?;
    let second = identity_residual(
        &quad.c.compose(&quad.d)?,
        &quad.s.compose(&quad.r)?.shift_real(quad.delta),
    )?;
    Ok(EcsusyResiduals { first, second })
}

pub fn build_triples(quad: &ECSusyQuadruple) -> Result<Triples> {
    let w = 1.0 / quad.spread();
    let k = Su11Triple {
        xplus: quad.d.compose(&quad.s)?.scale_real(w),
        xminus: quad.r.compose(&quad.c)?.scale_real(w),
        xzero: quad
            .d
            .compose(&quad.c)?
            .shift_real(-quad.gamma / 2.0)
            .scale_real(w),
        kind: TripleKind::K,
    };
    let l = Su11Triple {
        xplus: quad.s.compose(&quad.d)?.scale_real(w),
        xminus: quad.c.compose(&quad.r)?.scale_real(w),
        xzero: quad
            .s
            .compose(&quad.r)?
            .shift_real(quad.delta / 2.0)
            .scale_real(w),
        kind: TripleKind::L,
    };
    let p = k.adjoint_triple(TripleKind::P);
    let q = l.adjoint_triple(TripleKind::Q);
    Ok(Triples { k, l, p, q })
}

impl Su11Triple {
    pub fn new(
        xplus: TruncatedOperator,
        xminus: TruncatedOperator,
        xzero: TruncatedOperator,
        kind: TripleKind,
    ) -> Result<Self> {
        for op in [&xminus, &xzero] {
            if op.dim() != xplus.dim() {
                return Err(Error::DimensionMismatch {
                    left: xplus.dim(),
                    right: op.dim(),
                });
            }
        }
        Ok(Self {
            xplus,
            xminus,
            xzero,
            kind,
        })
    }

    pub fn dim(&self) -> usize {
        self.xzero.dim()
    }

    /// `(x_-^dagger, x_+^dagger, x_0^dagger)`: the triple that acts on dual families.
    pub fn adjoint_triple(&self, kind: TripleKind) -> Self {
        Self {
            xplus: self.xminus.adjoint(),
            xminus: self.xplus.adjoint(),
            xzero: self.xzero.adjoint(),
            kind,
        }
    }

    /// `T x T^{-1}` for each member.
    pub fn conjugate_by(
        &self,
        t: &TruncatedOperator,
        t_inv: &TruncatedOperator,
        kind: TripleKind,
    ) -> Result<Self> {
        let sim = |x: &TruncatedOperator| t.compose(x)?.compose(t_inv);
        Ok(Self {
            xplus: sim(&self.xplus)?,
            xminus: sim(&self.xminus)?,
            xzero: sim(&self.xzero)?,
            kind,
        })
    }

    pub fn commutator_residuals(&self) -> Result<CommutatorResiduals> {
        let zero_plus = identity_residual(&commutator(&self.xzero, &self.xplus)?, &self.xplus)?;
        let zero_minus = identity_residual(
            &commutator(&self.xzero, &self.xminus)?,
            &self.xminus.scale_real(-1.0),
        )?;
        let plus_minus = identity_residual(
            &commutator(&self.xplus, &self.xminus)?,
            &self.xzero.scale_real(-2.0),
        )?;
        Ok(CommutatorResiduals {
            zero_plus,
            zero_minus,
            plus_minus,
        })
    }

    /// `x^2 = x0^2 + x0 - x- x+`, checked against the other two printed forms.
    pub fn casimir(&self) -> Result<Casimir> {
        let x0_sq = self.xzero.compose(&self.xzero)?;
        let mp = self.xminus.compose(&self.xplus)?;
        let pm = self.xplus.compose(&self.xminus)?;
        let form_a = x0_sq.add(&self.xzero)?.sub(&mp)?;
        let form_b = x0_sq.sub(&self.xzero)?.sub(&pm)?;
        let form_c = x0_sq.sub(&mp.add(&pm)?.scale_real(0.5))?;
        let form_residual = identity_residual(&form_a, &form_b)?
            .max(identity_residual(&form_a, &form_c)?)
            .max(identity_residual(&form_b, &form_c)?);
        let zero = TruncatedOperator::zeros(self.dim())?;
        let mut centrality_residual: f64 = 0.0;
        for x in [&self.xzero, &self.xplus, &self.xminus] {
            centrality_residual =
                centrality_residual.max(identity_residual(&commutator(&form_a, x)?, &zero)?);
        }
        Ok(Casimir {
            operator: form_a,
            form_residual,
            centrality_residual,
        })
    }
}

impl Casimir {
    /// Guard-block distance of `x^2` from `value * 1`.
    pub fn scalar_residual(&self, value: f64) -> Result<f64> {
        let target = TruncatedOperator::identity(self.operator.dim())?.scale_real(value);
        identity_residual(&self.operator, &target)
    }
}
