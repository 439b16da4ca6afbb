//! The four verification commands. Each runs a fixed, ordered list of suites
//! and records every residual it computes.

use std::collections::BTreeSet;
use std::path::Path;

use ecsusy_core::deform::{
    c_differs_from_r, deform_quadruple, tilted_triples, tilted_vectors, verify_mapping_diagram,
    verify_tilted_ladder, DeformationPair, LadderCheck,
};
use ecsusy_core::ecsusy::{
    build_triples, classify_spectrum, dual_family, eigenfamily_from_lowest, half_shift_residuals,
    ladder_product_commutator_residual, verify_ecsusy, verify_intertwining, CSusy, ECSusyQuadruple,
    EigenFamily, SpectrumCase,
};
use ecsusy_core::exactcoeff::Table;
use ecsusy_core::fock::{
    bosonic_annihilator, commutator, identity_residual, FockVector, TruncatedOperator, C64,
    DEFAULT_KERNEL_TOL,
};
use ecsusy_core::pseudoboson::{
    build_families, check_pb, default_n_max, ladder_residuals, number_residuals,
    pb_pair_by_similarity, quasi_basis_partial_sums, random_diagonal, vacua, PBFamilies, PBPair,
    CONDITION_CAP,
};
use ecsusy_core::shifted_ho::{
    apply_pseudo_ladder, c_bridge_residual, grid_gram_deviation, inner_product, matrix_bridge,
    shifted_family, tilted_ho_vectors, write_family_csv, GridSpec, LadderDirection,
};
use ecsusy_core::su11families::{
    build_even, build_odd, interleave, odd_number_chain_residual, parity_leak,
    spans_intersect_trivially, specialize, verify_tables, ParityFamily, CASIMIR_VALUE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Recorder, VerificationReport};

type CoreResult<T> = ecsusy_core::Result<T>;

/// Lower bound on `|<phi~, eta~>|` that certifies the cross pairing is genuinely nonzero.
pub const CROSS_PAIRING_FLOOR: f64 = 1e-4;
/// Lower bound on the interleaved partial-sum deviation for a generic deformation.
pub const QUASI_BASIS_FAILURE_FLOOR: f64 = 1e-3;
/// Largest grid index for the finite-difference ladder checks.
pub const GRID_LADDER_MAX: usize = 8;
/// Number of leading coordinates carrying the random test vectors.
const TEST_SUPPORT: usize = 8;
/// Terms kept in the pseudo-bosonic resolution of the identity.
const PB_CUTOFF: usize = 16;
/// Proportionality constant of the `S = lambda T` instance.
const PROPORTIONAL_LAMBDA: f64 = 1.7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyCore,
    VerifyTables,
    VerifyDeform,
    ShiftedHo,
}

impl Command {
    pub const ALL: [Command; 4] = [
        Command::VerifyCore,
        Command::VerifyTables,
        Command::VerifyDeform,
        Command::ShiftedHo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyCore => "verify-core",
            Command::VerifyTables => "verify-tables",
            Command::VerifyDeform => "verify-deform",
            Command::ShiftedHo => "shifted-ho",
        }
    }

    /// Suites in execution order.
    pub fn suites(self) -> &'static [&'static str] {
        match self {
            Command::VerifyCore => &[
                "fock",
                "pseudoboson",
                "commutators",
                "casimir",
                "eigen",
                "intertwining",
            ],
            Command::VerifyTables => &["tables", "structure"],
            Command::VerifyDeform => &[
                "maps",
                "triples",
                "families",
                "ladder",
                "diagram",
                "quasi_basis",
            ],
            Command::ShiftedHo => &["family", "ladder", "tilted", "bridge"],
        }
    }

    fn select(self, config: &RunConfig) -> Result<Vec<&'static str>, CliError> {
        let Some(wanted) = &config.suites else {
            return Ok(self.suites().to_vec());
        };
        if wanted.is_empty() {
            return Err(CliError::Config("suite selection is empty".into()));
        }
        for w in wanted {
            if !self.suites().contains(&w.as_str()) {
                return Err(CliError::Config(format!(
                    "unknown suite '{w}' for {}; available: {}",
                    self.name(),
                    self.suites().join(", ")
                )));
            }
        }
        Ok(self
            .suites()
            .iter()
            .copied()
            .filter(|s| wanted.iter().any(|w| w == s))
            .collect())
    }
}

fn run_suites(
    command: Command,
    config: &RunConfig,
    mut body: impl FnMut(&str, &mut Recorder) -> CoreResult<()>,
) -> Result<VerificationReport, CliError> {
    config.validate()?;
    let selected = command.select(config)?;
    let mut rec = Recorder::new();
    for suite in selected {
        rec.set_prefix(suite);
        if let Err(e) = body(suite, &mut rec) {
            rec.error("error", &e);
        }
    }
    Ok(rec.finish(command.name(), config))
}

pub fn run(
    command: Command,
    config: &RunConfig,
    out: Option<&Path>,
) -> Result<VerificationReport, CliError> {
    match command {
        Command::VerifyCore => cmd_verify_core(config),
        Command::VerifyTables => cmd_verify_tables(config),
        Command::VerifyDeform => cmd_verify_deform(config),
        Command::ShiftedHo => cmd_shifted_ho(config, out),
    }
}

fn dpb_pair(cfg: &RunConfig) -> CoreResult<PBPair> {
    PBPair::complex_shifted(cfg.dim, cfg.alpha)
}

/// `a = V c0 V^{-1}` with a seeded random diagonal `V`: keeps every family on one parity.
fn similarity_pair(cfg: &RunConfig) -> CoreResult<PBPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    pb_pair_by_similarity(&random_diagonal(cfg.dim, 0.5, 2.0, &mut rng)?)
}

/// Parity families one member longer than `m_max`, as the raising rows require.
fn parity_families(
    pair: &PBPair,
    m_max: usize,
) -> CoreResult<(PBFamilies, ParityFamily, ParityFamily)> {
    let vac = vacua(pair, DEFAULT_KERNEL_TOL)?;
    let fam = build_families(pair, &vac, 2 * (m_max + 1) + 2)?;
    let even = build_even(pair, &fam, m_max + 1)?;
    let odd = build_odd(pair, &fam, m_max + 1)?;
    Ok((fam, even, odd))
}

/// Two vectors supported on the first few coordinates, drawn from the run seed.
fn test_vectors(dim: usize, seed: u64) -> CoreResult<(FockVector, FockVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut draw = || -> CoreResult<FockVector> {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for z in v.iter_mut().take(TEST_SUPPORT) {
            *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        FockVector::from_slice(&v)
    };
    Ok((draw()?, draw()?))
}

/// The D-PB specialization followed by the seeded random deformations.
fn quadruples(cfg: &RunConfig) -> CoreResult<Vec<(String, ECSusyQuadruple)>> {
    let pair = dpb_pair(cfg)?;
    let mut out = vec![("dpb".to_string(), specialize(&pair)?)];
    for i in 0..cfg.deformations {
        let def = DeformationPair::random_diagonal(cfg.dim, cfg.seed + i as u64)?;
        out.push((format!("deformed{i}"), deform_quadruple(&pair, &def)?));
    }
    Ok(out)
}

const ECSUSY_REF: &str = "d c = r s + gamma 1, c d = s r + delta 1";
const SU11_REF: &str = "[x0, x+] = x+, [x0, x-] = -x-, [x+, x-] = -2 x0";

pub fn cmd_verify_core(config: &RunConfig) -> Result<VerificationReport, CliError> {
    run_suites(Command::VerifyCore, config, |suite, rec| match suite {
        "fock" => core_fock(config, rec),
        "pseudoboson" => core_pseudoboson(config, rec),
        "commutators" => core_commutators(config, rec),
        "casimir" => core_casimir(config, rec),
        "eigen" => core_eigen(config, rec),
        "intertwining" => core_intertwining(config, rec),
        _ => unreachable!("suite list is fixed"),
    })
}

fn core_fock(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = cfg.tolerances.commutator;
    let n = cfg.dim;
    let c0 = bosonic_annihilator(n)?;
    let ccr = identity_residual(
        &commutator(&c0, &c0.adjoint())?,
        &TruncatedOperator::identity(n)?,
    )?;
    rec.at_most("ccr", "[c0, c0^dag] = 1", ccr, tol);

    let cs = CSusy::from_boson(n)?;
    let r = cs.residuals()?;
    rec.at_most("csusy.first", "a^dag a = b b^dag + gamma 1", r.first, tol);
    rec.at_most("csusy.second", "a a^dag = b^dag b + delta 1", r.second, tol);
    let classic = cs.classic_triple()?;
    rec.at_most(
        "csusy.classic_triple",
        SU11_REF,
        classic.commutator_residuals()?.max(),
        tol,
    );
    rec.at_most(
        "csusy.as_quadruple",
        ECSUSY_REF,
        verify_ecsusy(&cs.as_quadruple()?)?.max(),
        tol,
    );
    Ok(())
}

fn core_pseudoboson(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let pair = dpb_pair(cfg)?;
    rec.at_most(
        "ccr",
        "[a, b] = 1",
        check_pb(&pair, tol.commutator)?.residual,
        tol.commutator,
    );
    let vac = vacua(&pair, DEFAULT_KERNEL_TOL)?;
    rec.at_most(
        "vacua.pairing",
        "<phi_0, Psi_0> = 1",
        (vac.phi0.inner(&vac.psi0) - 1.0).norm(),
        tol.biorthonormality,
    );
    let fam = build_families(&pair, &vac, default_n_max(cfg.dim))?;
    rec.at_most(
        "biorthonormality",
        "<phi_n, Psi_m> = delta_nm",
        fam.biorthonormality_residual(),
        tol.biorthonormality,
    );
    let lr = ladder_residuals(&pair, &fam)?;
    for (id, reference, value) in [
        ("ladder.b_phi", "b phi_n = sqrt(n+1) phi_(n+1)", lr.b_on_phi),
        (
            "ladder.a_phi",
            "a phi_n = sqrt(n) phi_(n-1), a phi_0 = 0",
            lr.a_on_phi,
        ),
        (
            "ladder.adag_psi",
            "a^dag Psi_n = sqrt(n+1) Psi_(n+1)",
            lr.adag_on_psi,
        ),
        (
            "ladder.bdag_psi",
            "b^dag Psi_n = sqrt(n) Psi_(n-1), b^dag Psi_0 = 0",
            lr.bdag_on_psi,
        ),
    ] {
        rec.at_most(id, reference, value, tol.commutator);
    }
    let (n_phi, n_psi) = number_residuals(&pair, &fam)?;
    rec.at_most("number.phi", "b a phi_n = n phi_n", n_phi, tol.commutator);
    rec.at_most(
        "number.psi",
        "(b a)^dag Psi_n = n Psi_n",
        n_psi,
        tol.commutator,
    );

    let (f, g) = test_vectors(cfg.dim, cfg.seed)?;
    let sums = quasi_basis_partial_sums(&fam.phi, &fam.psi, &f, &g, &[PB_CUTOFF.min(fam.len())])?;
    let s = sums[0];
    rec.at_most(
        "quasi_basis",
        "sum_n <f, phi_n><Psi_n, g> = sum_n <f, Psi_n><phi_n, g> = <f, g>",
        s.deviation(),
        tol.quasi_basis,
    );
    rec.at_most(
        "quasi_basis.orderings",
        "both orderings of the resolution of the identity agree",
        (s.phi_psi - s.psi_phi).norm(),
        tol.biorthonormality,
    );
    Ok(())
}

fn core_commutators(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = cfg.tolerances.commutator;
    for (name, quad) in quadruples(cfg)? {
        rec.at_most(
            &format!("{name}.ecsusy"),
            ECSUSY_REF,
            verify_ecsusy(&quad)?.max(),
            tol,
        );
        for t in build_triples(&quad)?.iter() {
            rec.at_most(
                &format!("{name}.{}", t.kind),
                SU11_REF,
                t.commutator_residuals()?.max(),
                tol,
            );
        }
    }
    Ok(())
}

fn core_casimir(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    for (name, quad) in quadruples(cfg)?.into_iter().take(2) {
        for t in build_triples(&quad)?.iter() {
            let cas = t.casimir()?;
            let id = format!("{name}.{}", t.kind);
            rec.at_most(
                &format!("{id}.value"),
                "x^2 = -3/16 1",
                cas.scalar_residual(CASIMIR_VALUE)?,
                tol.casimir,
            );
            rec.at_most(
                &format!("{id}.forms"),
                "x0^2 + x0 - x- x+ = x0^2 - x0 - x+ x- = x0^2 - (x+ x- + x- x+)/2",
                cas.form_residual,
                tol.casimir,
            );
            rec.at_most(
                &format!("{id}.central"),
                "[x^2, x0] = [x^2, x+] = [x^2, x-] = 0",
                cas.centrality_residual,
                tol.commutator,
            );
        }
    }
    Ok(())
}

fn record_eigenfamily(
    rec: &mut Recorder,
    id: &str,
    fam: &EigenFamily,
    offset: f64,
    count: usize,
    tol: f64,
) {
    rec.holds(
        &format!("{id}.length"),
        "the ladder reaches every requested member",
        fam.len() == count,
    )
    .detail = Some(format!("{} of {count} members", fam.len()));
    let labels = fam
        .entries
        .iter()
        .enumerate()
        .map(|(m, e)| (e.q - C64::new(m as f64 + offset, 0.0)).norm())
        .fold(0.0, f64::max);
    let reference = if offset < 0.5 {
        "k0 v_m = (m + 1/4) v_m"
    } else {
        "k0 v_m = (m + 3/4) v_m"
    };
    rec.at_most(&format!("{id}.labels"), reference, labels, tol);
    // the lowest-weight root is j = -q0, so the odd ladder reports j = -3/4;
    // both roots share j(j+1)
    let jj = fam.j * (fam.j + 1.0);
    rec.at_most(
        &format!("{id}.j"),
        "j(j+1) = -3/16",
        (jj - C64::new(CASIMIR_VALUE, 0.0)).norm(),
        tol,
    );
    rec.at_most(
        &format!("{id}.eigen"),
        "k0 v = q v",
        fam.max_eigen_residual(),
        tol,
    );
    rec.at_most(
        &format!("{id}.casimir"),
        "k^2 v = j(j+1) v",
        fam.max_casimir_residual(),
        tol,
    );
    rec.at_most(
        &format!("{id}.spacing"),
        "consecutive labels differ by 1",
        fam.label_spacing_residual(),
        tol,
    );
}

fn core_eigen(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let pair = dpb_pair(cfg)?;
    let vac = vacua(&pair, DEFAULT_KERNEL_TOL)?;
    let fam = build_families(&pair, &vac, 1)?;
    let t = build_triples(&specialize(&pair)?)?;
    let count = cfg.m_max + 1;

    let even = eigenfamily_from_lowest(&t.k, &vac.phi0, count)?;
    record_eigenfamily(rec, "even", &even, 0.25, count, tol.commutator);
    rec.at_most(
        "even.ladder_product",
        "[k0, k- k+] = 0 on the family",
        ladder_product_commutator_residual(&t.k, &even)?,
        tol.commutator,
    );
    let odd = eigenfamily_from_lowest(&t.k, &fam.phi[1], count)?;
    record_eigenfamily(rec, "odd", &odd, 0.75, count, tol.commutator);

    let class = classify_spectrum(&t.k, &even, cfg.dim, 2)?;
    rec.holds(
        "classification",
        "spectrum bounded below (case 1) with k- v_0 = 0",
        class.case == SpectrumCase::Case1 && class.lower_witness == Some(1),
    )
    .detail = Some(format!("{class:?}"));

    // the dual computed inside span(v) is the biorthonormal partner only when
    // the pair keeps each ladder on one Fock parity
    let sim = similarity_pair(cfg)?;
    let sim_vac = vacua(&sim, DEFAULT_KERNEL_TOL)?;
    let sim_t = build_triples(&specialize(&sim)?)?;
    let sim_even = eigenfamily_from_lowest(&sim_t.k, &sim_vac.phi0, count)?;
    let dual = dual_family(&sim_t.p, &sim_even)?;
    let r = dual.residuals;
    for (id, reference, value) in [
        (
            "dual.biorthonormality",
            "<v_m, w_n> = delta_mn",
            r.biorthonormality,
        ),
        ("dual.eigen", "p0 w_q = conj(q) w_q", r.eigen),
        ("dual.raising", "p+ w_q = conj(q+1+j) w_(q+1)", r.raising),
        ("dual.lowering", "p- w_q = conj(q-1-j) w_(q-1)", r.lowering),
        ("dual.casimir", "p^2 w = conj(j(j+1)) w", r.casimir),
    ] {
        rec.at_most(id, reference, value, tol.biorthonormality);
    }
    Ok(())
}

fn core_intertwining(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = cfg.tolerances.commutator;
    let pair = dpb_pair(cfg)?;
    let def = DeformationPair::random_diagonal(cfg.dim, cfg.seed)?;
    let quad = deform_quadruple(&pair, &def)?;
    let t = build_triples(&quad)?;
    for (i, rel) in verify_intertwining(&quad, &t)?.iter().enumerate() {
        rec.at_most(&format!("{:02}", i + 1), rel.name, rel.residual, tol);
    }
    let vac = vacua(&pair, DEFAULT_KERNEL_TOL)?;
    let v0 = def.t().apply(&vac.phi0)?;
    let fam = eigenfamily_from_lowest(&t.k, &v0, cfg.m_max + 1)?;
    let hs = half_shift_residuals(&quad, &t, &fam)?;
    rec.at_most(
        "half_shift.s",
        "l0 (s v) = (q + 1/2)(s v)",
        hs.s_raises,
        tol,
    );
    rec.at_most(
        "half_shift.c",
        "l0 (c v) = (q - 1/2)(c v)",
        hs.c_lowers,
        tol,
    );
    rec.holds(
        "half_shift.compared",
        "some images were large enough to compare",
        hs.compared > 0,
    )
    .detail = Some(format!("{} images compared", hs.compared));
    Ok(())
}

pub fn cmd_verify_tables(config: &RunConfig) -> Result<VerificationReport, CliError> {
    run_suites(Command::VerifyTables, config, |suite, rec| {
        let pair = similarity_pair(config)?;
        let (fam, even, odd) = parity_families(&pair, config.m_max)?;
        match suite {
            "tables" => tables_cells(config, rec, &pair, &even, &odd),
            "structure" => tables_structure(config, rec, &pair, &fam, &even, &odd),
            _ => unreachable!("suite list is fixed"),
        }
    })
}

fn table_name(t: Table) -> &'static str {
    match t {
        Table::One => "one",
        Table::Two => "two",
    }
}

fn tables_cells(
    cfg: &RunConfig,
    rec: &mut Recorder,
    pair: &PBPair,
    even: &ParityFamily,
    odd: &ParityFamily,
) -> CoreResult<()> {
    let checks = verify_tables(pair, even, odd, cfg.m_max)?;
    let mut families = BTreeSet::new();
    let mut flagged = BTreeSet::new();
    for c in &checks {
        let family = format!(
            "{}.{}.{}",
            table_name(c.table),
            c.row.name(),
            c.parity.name()
        );
        let id = format!("{family}.m{}", c.m);
        let reference = match &c.target {
            Some(t) => format!(
                "{} on {} member {} = {} * {t}",
                c.row.name(),
                c.parity.name(),
                c.m,
                c.coefficient
            ),
            None => format!(
                "{} annihilates {} member {}",
                c.row.name(),
                c.parity.name(),
                c.m
            ),
        };
        let float = rec.at_most(
            &format!("{id}.float"),
            &reference,
            c.float_residual,
            cfg.tolerances.table,
        );
        if let Some(m) = &c.misprint {
            float.printed_form_inconsistent = true;
            float.detail = Some(format!(
                "printed: {}; verified: {}",
                m.printed, m.consistent
            ));
            flagged.insert(family.clone());
        }
        rec.holds(
            &format!("{id}.exact"),
            "closed-form coefficient equals the Fock-route coefficient exactly",
            c.exact_match,
        );
        families.insert(family);
    }
    rec.holds(
        "row_families",
        "every printed cell of both tables: 8 row families in the first, 12 in the second",
        families.len() == 20,
    )
    .detail = Some(format!("{} row families", families.len()));
    rec.holds(
        "misprints",
        "exactly two printed index misprints, both in the first table",
        flagged.len() == 2 && flagged.iter().all(|f| f.starts_with("one.")),
    )
    .detail = Some(
        flagged
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(", "),
    );
    Ok(())
}

fn tables_structure(
    cfg: &RunConfig,
    rec: &mut Recorder,
    pair: &PBPair,
    fam: &PBFamilies,
    even: &ParityFamily,
    odd: &ParityFamily,
) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let t = build_triples(&specialize(pair)?)?;
    for (p, offset) in [(even, 0.25), (odd, 0.75)] {
        let name = p.parity.name();
        rec.at_most(
            &format!("{name}.biorthonormality"),
            "<phi(m), psi(n)> = delta_mn",
            p.biorthonormality_residual(),
            tol.biorthonormality,
        );
        rec.at_most(
            &format!("{name}.closed_form"),
            "ladder-built members equal the normalized phi_n, Psi_n",
            p.closed_form_residual,
            tol.biorthonormality,
        );
        match p.span_dual_residual {
            Some(r) => {
                rec.at_most(
                    &format!("{name}.span_dual"),
                    "psi is the dual basis inside span(phi)",
                    r,
                    tol.biorthonormality,
                );
            }
            None => rec.error(
                &format!("{name}.span_dual"),
                &"span dual could not be computed",
            ),
        }
        let mut worst: f64 = 0.0;
        for v in &p.phi {
            let q = v.m as f64 + offset;
            let img = t.k.xzero.apply(&v.vector)?;
            worst = worst.max(img.sub(&v.vector.scale_real(q)).norm() / v.vector.norm());
        }
        let reference = if offset < 0.5 {
            "k0 phi(m) = (m + 1/4) phi(m)"
        } else {
            "k0 phi(m) = (m + 3/4) phi(m)"
        };
        rec.at_most(
            &format!("{name}.eigenvalues"),
            reference,
            worst,
            tol.commutator,
        );
        let mut all = p.phi.clone();
        all.extend(p.psi.iter().cloned());
        rec.at_most(
            &format!("{name}.parity"),
            "members carry one Fock parity",
            parity_leak(&all),
            0.0,
        );
    }
    rec.at_most(
        "odd.number_chain",
        "b a phi_odd(m) = (2m+1) phi_odd(m)",
        odd_number_chain_residual(pair, odd)?,
        tol.commutator,
    );
    let inter = interleave(even, odd)?;
    rec.at_most(
        "interleaved.pairing",
        "<Phi_n, Xi_m> = delta_nm",
        inter.pairing_residual,
        tol.biorthonormality,
    );
    let (f, g) = test_vectors(cfg.dim, cfg.seed)?;
    rec.at_most(
        "interleaved.partial_sums",
        "interleaved partial sums match the phi_n, Psi_n sums",
        inter.partial_sum_agreement(fam, &f, &g)?,
        tol.quasi_basis,
    );
    rec.holds(
        "spans_disjoint",
        "span(even) and span(odd) meet only in 0",
        spans_intersect_trivially(&even.phi_vectors(), &odd.phi_vectors()),
    );
    Ok(())
}

pub fn cmd_verify_deform(config: &RunConfig) -> Result<VerificationReport, CliError> {
    run_suites(Command::VerifyDeform, config, |suite, rec| match suite {
        "maps" => deform_maps(config, rec),
        "triples" => deform_triples(config, rec),
        "families" | "ladder" | "diagram" => deform_families(config, rec, suite),
        "quasi_basis" => deform_quasi_basis(config, rec),
        _ => unreachable!("suite list is fixed"),
    })
}

fn deform_maps(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = cfg.tolerances.commutator;
    let pair = dpb_pair(cfg)?;
    let def = DeformationPair::random_diagonal(cfg.dim, cfg.seed)?;
    let (ks, kt) = def.condition_numbers();
    rec.at_most("condition.s", "kappa(S) below the cap", ks, CONDITION_CAP);
    rec.at_most("condition.t", "kappa(T) below the cap", kt, CONDITION_CAP);
    rec.at_most(
        "inverse",
        "S S^-1 = T T^-1 = 1",
        def.adjoint_inverse_residual()?,
        tol,
    );
    let quad = deform_quadruple(&pair, &def)?;
    rec.at_most("quadruple", ECSUSY_REF, verify_ecsusy(&quad)?.max(), tol);
    rec.holds("genuine", "c and r differ", c_differs_from_r(&quad)?);
    Ok(())
}

fn deform_triples(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let pair = dpb_pair(cfg)?;
    let def = DeformationPair::random_diagonal(cfg.dim, cfg.seed)?;
    let base = build_triples(&specialize(&pair)?)?;
    let tilted = tilted_triples(&def, &base)?;
    let direct = build_triples(&deform_quadruple(&pair, &def)?)?;
    let (ks, kt) = def.condition_numbers();
    for ((b, t), d) in base.iter().zip(tilted.iter()).zip(direct.iter()) {
        let k = t.kind;
        let untilted = b.commutator_residuals()?.max();
        let res = t.commutator_residuals()?.max();
        rec.at_most(&format!("{k}.commutators"), SU11_REF, res, tol.commutator);
        rec.at_most(
            &format!("{k}.covariance"),
            "tilted residual within kappa(S) kappa(T) of the untilted one",
            res,
            ks * kt * untilted + f64::EPSILON * 1e4,
        );
        rec.at_most(
            &format!("{k}.casimir"),
            "x~^2 = -3/16 1",
            t.casimir()?.scalar_residual(CASIMIR_VALUE)?,
            tol.casimir,
        );
        let same = [
            identity_residual(&t.xplus, &d.xplus)?,
            identity_residual(&t.xminus, &d.xminus)?,
            identity_residual(&t.xzero, &d.xzero)?,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        rec.at_most(
            &format!("{k}.from_quadruple"),
            "conjugated triple equals the triple of the deformed quadruple",
            same,
            tol.commutator,
        );
    }
    Ok(())
}

fn record_ladder(rec: &mut Recorder, checks: &[LadderCheck], tol: f64) {
    for c in checks {
        let id = format!("{}.m{}", c.relation.replace(' ', "_"), c.m);
        let reference = format!(
            "{} at m = {}, coefficient {:.17e}",
            c.relation, c.m, c.coefficient
        );
        rec.at_most(&id, &reference, c.residual, tol);
    }
}

fn deform_families(cfg: &RunConfig, rec: &mut Recorder, suite: &str) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let pair = dpb_pair(cfg)?;
    let def = DeformationPair::random_diagonal(cfg.dim, cfg.seed)?;
    let (_, even, odd) = parity_families(&pair, cfg.m_max)?;
    let fams = tilted_vectors(&def, &even, &odd)?;
    match suite {
        "families" => {
            let tilted = tilted_triples(&def, &build_triples(&specialize(&pair)?)?)?;
            rec.at_most(
                "eigen",
                "k~0 phi~ = q phi~, p~0 psi~ = q psi~, l~0 chi~ = q chi~, q~0 eta~ = q eta~",
                fams.eigen_residuals(&tilted)?.max(),
                tol.commutator,
            );
            let (a, b) = fams.pair_residuals();
            rec.at_most(
                "pairing.even",
                "<phi~_m, psi~_n> = delta_mn",
                a,
                tol.biorthonormality,
            );
            rec.at_most(
                "pairing.odd",
                "<chi~_m, eta~_n> = delta_mn",
                b,
                tol.biorthonormality,
            );
            rec.at_least(
                "cross_pairing",
                "<phi~, eta~> does not vanish for S != lambda T",
                fams.cross_pairing(cfg.m_max),
                CROSS_PAIRING_FLOOR,
            );
        }
        "ladder" => {
            let tilted = tilted_triples(&def, &build_triples(&specialize(&pair)?)?)?;
            record_ladder(
                rec,
                &verify_tilted_ladder(&tilted, &fams, cfg.m_max)?,
                tol.table,
            );
        }
        "diagram" => {
            let quad = deform_quadruple(&pair, &def)?;
            record_ladder(
                rec,
                &verify_mapping_diagram(&quad, &fams, cfg.m_max)?,
                tol.table,
            );
        }
        _ => unreachable!(),
    }
    Ok(())
}

fn deform_quasi_basis(cfg: &RunConfig, rec: &mut Recorder) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let (f, g) = test_vectors(cfg.dim, cfg.seed)?;
    let pair = dpb_pair(cfg)?;
    let (_, even, odd) = parity_families(&pair, cfg.m_max)?;

    let generic = tilted_vectors(
        &DeformationPair::random_diagonal(cfg.dim, cfg.seed)?,
        &even,
        &odd,
    )?;
    rec.at_least(
        "generic_fails",
        "interleaved tilted sums miss <f, g> for S != lambda T",
        generic.quasi_basis_deviation(&f, &g)?,
        QUASI_BASIS_FAILURE_FLOOR,
    );
    let prop = DeformationPair::proportional(cfg.dim, PROPORTIONAL_LAMBDA, cfg.seed)?;
    rec.at_most(
        "proportional_restores",
        "S = lambda T: interleaved tilted sums reproduce <f, g>",
        tilted_vectors(&prop, &even, &odd)?.quasi_basis_deviation(&f, &g)?,
        tol.quasi_basis,
    );

    let sim = similarity_pair(cfg)?;
    let (_, even_s, odd_s) = parity_families(&sim, cfg.m_max)?;
    let parity = tilted_vectors(
        &DeformationPair::random_diagonal(cfg.dim, cfg.seed)?,
        &even_s,
        &odd_s,
    )?;
    rec.at_most(
        "parity_preserving.cross_pairing",
        "one-parity families with diagonal S, T: <phi~, eta~> = 0",
        parity.cross_pairing(cfg.m_max),
        0.0,
    );
    rec.at_most(
        "parity_preserving_restores",
        "one-parity families with diagonal S, T: interleaved sums reproduce <f, g>",
        parity.quasi_basis_deviation(&f, &g)?,
        tol.quasi_basis,
    );
    Ok(())
}

/// Runs the grid suites; with `csv_dir`, also writes `phi_n` and `psi_n` as CSV.
pub fn cmd_shifted_ho(
    config: &RunConfig,
    csv_dir: Option<&Path>,
) -> Result<VerificationReport, CliError> {
    config.validate()?;
    let spec = config.grid_spec()?;
    let report = run_suites(Command::ShiftedHo, config, |suite, rec| match suite {
        "family" => ho_family(config, &spec, rec),
        "ladder" => ho_ladder(config, &spec, rec),
        "tilted" => ho_tilted(config, &spec, rec),
        "bridge" => ho_bridge(config, &spec, rec),
        _ => unreachable!("suite list is fixed"),
    })?;
    if let Some(dir) = csv_dir {
        let fam = shifted_family(config.grid.n_max, config.alpha, &spec)?;
        write_family_csv(dir, "phi", &fam.phi, config.alpha, config.alpha)?;
        write_family_csv(dir, "psi", &fam.psi, config.alpha, -config.alpha)?;
    }
    Ok(report)
}

fn ho_family(cfg: &RunConfig, spec: &GridSpec, rec: &mut Recorder) -> CoreResult<()> {
    let fam = shifted_family(cfg.grid.n_max, cfg.alpha, spec)?;
    rec.at_most(
        "biorthonormality",
        "<phi_n, psi_m> = delta_nm by trapezoid quadrature",
        grid_gram_deviation(&fam.phi, &fam.psi)?,
        cfg.tolerances.quadrature,
    );
    let mut conj: f64 = 0.0;
    for (p, q) in fam.phi.iter().zip(&fam.psi) {
        for (a, b) in p.samples().iter().zip(q.samples()) {
            conj = conj.max((a.conj() - b).norm());
        }
    }
    rec.at_most(
        "conjugation",
        "psi_n(x) = conj(phi_n(x))",
        conj,
        cfg.tolerances.quadrature,
    );
    Ok(())
}

fn ho_ladder(cfg: &RunConfig, spec: &GridSpec, rec: &mut Recorder) -> CoreResult<()> {
    let tol = cfg.tolerances.grid_ladder;
    let fam = shifted_family(cfg.grid.n_max, cfg.alpha, spec)?;
    let top = GRID_LADDER_MAX.min(cfg.grid.n_max);
    for n in 0..=top {
        let lowered = apply_pseudo_ladder(&fam.phi[n], cfg.alpha, LadderDirection::Lower);
        if n == 0 {
            rec.at_most(
                "lower.n0",
                "a phi_0 = 0 (interior)",
                lowered.interior_max_abs(),
                tol,
            );
        } else {
            let want = fam.phi[n - 1].scale_real((n as f64).sqrt());
            rec.at_most(
                &format!("lower.n{n}.coefficient"),
                "<psi_(n-1), a phi_n> = sqrt(n)",
                (inner_product(&fam.psi[n - 1], &lowered)? - (n as f64).sqrt()).norm(),
                tol,
            );
            rec.at_most(
                &format!("lower.n{n}"),
                "a phi_n = sqrt(n) phi_(n-1), relative to max(1, sup|rhs|), interior",
                lowered.scaled_interior_distance(&want)?,
                tol,
            );
        }
    }
    for n in 0..top.min(cfg.grid.n_max - 1) {
        let raised = apply_pseudo_ladder(&fam.phi[n], cfg.alpha, LadderDirection::Raise);
        let want = fam.phi[n + 1].scale_real(((n + 1) as f64).sqrt());
        rec.at_most(
            &format!("raise.n{n}"),
            "b phi_n = sqrt(n+1) phi_(n+1), relative to max(1, sup|rhs|), interior",
            raised.scaled_interior_distance(&want)?,
            tol,
        );
    }
    Ok(())
}

fn ho_tilted(cfg: &RunConfig, spec: &GridSpec, rec: &mut Recorder) -> CoreResult<()> {
    let tol = &cfg.tolerances;
    let t = tilted_ho_vectors(cfg.alpha, cfg.sigma, cfg.tau, cfg.grid.m_max, spec)?;
    let (a, b) = t.pair_residuals()?;
    rec.at_most(
        "pairing.even",
        "<phi~_m, psi~_n> = delta_mn",
        a,
        tol.quadrature,
    );
    rec.at_most(
        "pairing.odd",
        "<chi~_m, eta~_n> = delta_mn",
        b,
        tol.quadrature,
    );
    let cross = t.cross_pairing()?;
    if cfg.sigma != cfg.tau {
        rec.at_least(
            "cross_pairing",
            "<phi~, eta~> does not vanish for sigma != tau",
            cross,
            CROSS_PAIRING_FLOOR,
        );
    } else {
        rec.at_most(
            "cross_pairing",
            "<phi~, eta~> = 0 for sigma = tau",
            cross,
            tol.quadrature,
        );
    }
    rec.at_most(
        "c_bridge",
        "c phi~_m = 2m/(2m-1) chi~_(m-1), compared in shifted coordinates",
        c_bridge_residual(cfg.alpha, cfg.sigma, cfg.tau, cfg.grid.m_max, spec)?,
        tol.grid_ladder,
    );
    Ok(())
}

fn ho_bridge(cfg: &RunConfig, spec: &GridSpec, rec: &mut Recorder) -> CoreResult<()> {
    let tol = cfg.tolerances.grid_ladder;
    let r = matrix_bridge(cfg.alpha, cfg.grid.n_max, cfg.dim, spec)?;
    rec.at_most(
        "phi",
        "e_k coordinates of grid phi_n equal the matrix phi_n",
        r.phi_coordinates,
        tol,
    );
    rec.at_most(
        "psi",
        "e_k coordinates of grid psi_n equal the matrix Psi_n",
        r.psi_coordinates,
        tol,
    );
    rec.at_most(
        "ladder_round_trip",
        "grid a and matrix a agree in e_k coordinates, relative to max(1, sup|rhs|)",
        r.ladder_round_trip,
        tol,
    );
    Ok(())
}
