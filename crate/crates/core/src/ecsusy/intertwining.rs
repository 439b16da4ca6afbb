use super::{ECSusyQuadruple, EigenFamily, Triples};
use crate::error::Result;
use crate::fock::{identity_residual, TruncatedOperator};

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: &'static str,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfShiftResiduals {
    /// `l0 (s v) = (q + 1/2)(s v)`
    pub s_raises: f64,
    /// `l0 (c v) = (q - 1/2)(c v)`
    pub c_lowers: f64,
    /// Members whose images were large enough to be compared.
    pub compared: usize,
}

fn rel(
    name: &'static str,
    lhs: Result<TruncatedOperator>,
    rhs: Result<TruncatedOperator>,
) -> Result<Relation> {
    Ok(Relation {
        name,
        residual: identity_residual(&lhs?, &rhs?)?,
    })
}

/// The sixteen intertwining identities between the `k, l, p, q` triples, in a fixed order.
pub fn verify_intertwining(quad: &ECSusyQuadruple, t: &Triples) -> Result<Vec<Relation>> {
    let (d, c, r, s) = (&quad.d, &quad.c, &quad.r, &quad.s);
    let (rd, cd, dd, sd) = (r.adjoint(), c.adjoint(), d.adjoint(), s.adjoint());
    let (k, l, p, q) = (&t.k, &t.l, &t.p, &t.q);
    let up = |x: &TruncatedOperator| x.shift_real(0.5);
    let down = |x: &TruncatedOperator| x.shift_real(-0.5);
    Ok(vec![
        rel("s k+ = l+ s", s.compose(&k.xplus), l.xplus.compose(s))?,
        rel("k+ d = d l+", k.xplus.compose(d), d.compose(&l.xplus))?,
        rel("c k- = l- c", c.compose(&k.xminus), l.xminus.compose(c))?,
        rel("k- r = r l-", k.xminus.compose(r), r.compose(&l.xminus))?,
        rel(
            "r^dag p+ = q+ r^dag",
            rd.compose(&p.xplus),
            q.xplus.compose(&rd),
        )?,
        rel(
            "p+ c^dag = c^dag q+",
            p.xplus.compose(&cd),
            cd.compose(&q.xplus),
        )?,
        rel(
            "d^dag p- = q- d^dag",
            dd.compose(&p.xminus),
            q.xminus.compose(&dd),
        )?,
        rel(
            "p- s^dag = s^dag q-",
            p.xminus.compose(&sd),
            sd.compose(&q.xminus),
        )?,
        rel(
            "l0 s = s (k0 + 1/2)",
            l.xzero.compose(s),
            s.compose(&up(&k.xzero)),
        )?,
        rel(
            "l0 c = c (k0 - 1/2)",
            l.xzero.compose(c),
            c.compose(&down(&k.xzero)),
        )?,
        rel(
            "r l0 = (k0 + 1/2) r",
            r.compose(&l.xzero),
            up(&k.xzero).compose(r),
        )?,
        rel(
            "d l0 = (k0 - 1/2) d",
            d.compose(&l.xzero),
            down(&k.xzero).compose(d),
        )?,
        rel(
            "q0 r^dag = r^dag (p0 + 1/2)",
            q.xzero.compose(&rd),
            rd.compose(&up(&p.xzero)),
        )?,
        rel(
            "q0 d^dag = d^dag (p0 - 1/2)",
            q.xzero.compose(&dd),
            dd.compose(&down(&p.xzero)),
        )?,
        rel(
            "s^dag q0 = (p0 + 1/2) s^dag",
            sd.compose(&q.xzero),
            up(&p.xzero).compose(&sd),
        )?,
        rel(
            "c^dag q0 = (p0 - 1/2) c^dag",
            cd.compose(&q.xzero),
            down(&p.xzero).compose(&cd),
        )?,
    ])
}

/// Vector-level eigenvalue shifts carried by `s` and `c` from `k0` to `l0`.
pub fn half_shift_residuals(
    quad: &ECSusyQuadruple,
    t: &Triples,
    family: &EigenFamily,
) -> Result<HalfShiftResiduals> {
    let mut out = HalfShiftResiduals {
        s_raises: 0.0,
        c_lowers: 0.0,
        compared: 0,
    };
    for e in &family.entries {
        let base = e.vector.norm();
        for (op, shift, slot) in [(&quad.s, 0.5, 0usize), (&quad.c, -0.5, 1usize)] {
            let w = op.apply(&e.vector)?;
            if w.norm() <= 1e-8 * base {
                continue;
            }
            out.compared += 1;
            let res = t.l.xzero.apply(&w)?.sub(&w.scale(e.q + shift)).norm() / w.norm();
            if slot == 0 {
                out.s_raises = out.s_raises.max(res);
            } else {
                out.c_lowers = out.c_lowers.max(res);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{build_triples, eigenfamily_from_lowest};
    use super::*;
    use crate::fock::DEFAULT_KERNEL_TOL;
    use crate::pseudoboson::{vacua, PBPair};

    #[test]
    fn dpb_intertwining() {
        let pair = PBPair::complex_shifted(64, 0.5).unwrap();
        let phi0 = vacua(&pair, DEFAULT_KERNEL_TOL).unwrap().phi0;
        let quad = ECSusyQuadruple::new(
            pair.b.clone(),
            pair.a.clone(),
            pair.a.clone(),
            pair.b,
            -1.0,
            1.0,
        )
        .unwrap();
        let t = build_triples(&quad).unwrap();
        let rels = verify_intertwining(&quad, &t).unwrap();
        assert_eq!(rels.len(), 16);
        for r in &rels {
            assert!(r.residual < 1e-11, "{} {}", r.name, r.residual);
        }
        let fam = eigenfamily_from_lowest(&t.k, &phi0, 8).unwrap();
        let hs = half_shift_residuals(&quad, &t, &fam).unwrap();
        // c annihilates phi_0, every other image is compared
        assert_eq!(hs.compared, 15);
        assert!(hs.s_raises < 1e-9 && hs.c_lowers < 1e-9, "{hs:?}");
    }
}
