//! The complex-shifted harmonic oscillator on a uniform real grid.
//!
//! `phi_n(x) = e_n(x - i alpha)` and `psi_n(x) = e_n(x + i alpha)` are sampled
//! from the normalized Hermite recurrence, paired by trapezoid quadrature and
//! differentiated by fourth-order central differences.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::exactcoeff::{even_norm, odd_norm};
use crate::fock::{FockVector, C64};

/// Points excluded at each end after one finite-difference derivative.
pub const STENCIL_BOUNDARY: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    samples: Vec<C64>,
    /// Samples at each end that carry no valid data.
    boundary: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderDirection {
    /// `a = (x + d/dx)/sqrt 2 - i alpha / sqrt 2`
    Lower,
    /// `b = (x - d/dx)/sqrt 2 - i alpha / sqrt 2`
    Raise,
}

#[derive(Clone, Debug)]
pub struct ShiftedFamily {
    pub alpha: f64,
    pub phi: Vec<GridFunction>,
    pub psi: Vec<GridFunction>,
}

/// Sampled tilted vectors: even members shifted by `alpha + tau`, odd ones by `alpha + sigma`.
#[derive(Clone, Debug)]
pub struct TiltedGridFamilies {
    pub phi: Vec<GridFunction>,
    pub psi: Vec<GridFunction>,
    pub chi: Vec<GridFunction>,
    pub eta: Vec<GridFunction>,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least two points, got {points}"
            )));
        }
        Ok(Self { half_width, points })
    }

    /// `L = max(12, 4 sqrt(2 n_max + 1) + 4|alpha| + 4)`, `M = 2001`.
    pub fn default_for(n_max: usize, alpha: f64) -> Self {
        let l = (4.0 * ((2 * n_max + 1) as f64).sqrt() + 4.0 * alpha.abs() + 4.0).max(12.0);
        Self {
            half_width: l,
            points: 2001,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    /// Whether the grid covers `e_n(x ∓ i shift)` for `n <= n_max`: the window
    /// must extend five units past the turning point and the step must sample
    /// the fastest oscillation at least twice per radian.
    pub fn resolves(&self, n_max: usize, shift: f64) -> bool {
        let reach = ((2 * n_max + 1) as f64).sqrt() + shift.abs();
        self.half_width >= reach + 5.0 && self.spacing() <= 0.5 / (reach + 1.0)
    }

    fn require(&self, n_max: usize, shift: f64) -> Result<()> {
        if self.resolves(n_max, shift) {
            Ok(())
        } else {
            Err(Error::UnderResolved { n_max, shift })
        }
    }
}

/// `e_n(z)` for `n = 0..=n_max` by the normalized three-term recurrence.
pub fn hermite_functions(n_max: usize, z: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let e0 = std::f64::consts::PI.powf(-0.25) * (-z * z / 2.0).exp();
    out.push(e0);
    if n_max >= 1 {
        out.push(z * 2f64.sqrt() * e0);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = z * (2.0 / (nf + 1.0)).sqrt() * out[n] - out[n - 1] * (nf / (nf + 1.0)).sqrt();
        out.push(next);
    }
    out
}

/// `e_n(z) = H_n(z) exp(-z^2/2) / sqrt(2^n n! sqrt(pi))`.
pub fn hermite_eigenfunction(n: usize, z: C64) -> C64 {
    hermite_functions(n, z)[n]
}

/// Physicists' `H_n(z)` from `H_{n+1} = 2z H_n - 2n H_{n-1}`; overflows for large `n`.
pub fn hermite_polynomial(n: usize, z: C64) -> C64 {
    let mut prev = C64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = z * 2.0;
    for k in 1..n {
        let next = z * 2.0 * cur - prev * (2.0 * k as f64);
        prev = cur;
        cur = next;
    }
    cur
}

impl GridFunction {
    pub fn new(spec: GridSpec, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != spec.points() {
            return Err(Error::DimensionMismatch {
                left: spec.points(),
                right: samples.len(),
            });
        }
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            spec,
            samples,
            boundary: 0,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            spec: self.spec,
            samples: self.samples.iter().map(|z| z * factor).collect(),
            boundary: self.boundary,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            spec: self.spec,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
            boundary: self.boundary.max(other.boundary),
        })
    }

    /// `max |f - g|` over points valid in both functions.
    pub fn interior_distance(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let skip = self.boundary.max(other.boundary);
        let n = self.samples.len();
        if 2 * skip >= n {
            return Ok(0.0);
        }
        Ok((skip..n - skip)
            .map(|i| (self.samples[i] - other.samples[i]).norm())
            .fold(0.0, f64::max))
    }

    /// `interior_distance / max(1, interior sup of other)`.
    pub fn scaled_interior_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.interior_distance(other)? / other.interior_max_abs().max(1.0))
    }

    pub fn interior_max_abs(&self) -> f64 {
        let n = self.samples.len();
        let skip = self.boundary.min(n / 2);
        self.samples[skip..n - skip]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// `e_n(x - i shift)` for `n <= n_max` without a resolution check.
pub fn sample_shifted(n_max: usize, shift: f64, spec: &GridSpec) -> Vec<GridFunction> {
    let mut cols = vec![Vec::with_capacity(spec.points()); n_max + 1];
    for x in spec.xs() {
        for (n, v) in hermite_functions(n_max, C64::new(x, -shift))
            .into_iter()
            .enumerate()
        {
            cols[n].push(v);
        }
    }
    cols.into_iter()
        .map(|samples| GridFunction {
            spec: *spec,
            samples,
            boundary: 0,
        })
        .collect()
}

pub fn shifted_family(n_max: usize, alpha: f64, spec: &GridSpec) -> Result<ShiftedFamily> {
    spec.require(n_max, alpha)?;
    Ok(ShiftedFamily {
        alpha,
        phi: sample_shifted(n_max, alpha, spec),
        psi: sample_shifted(n_max, -alpha, spec),
    })
}

/// Trapezoid approximation of `∫ conj(f) g dx`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<C64> {
    f.same_grid(g)?;
    let n = f.samples.len();
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sum += f.samples[i].conj() * g.samples[i] * w;
    }
    Ok(sum * f.spec.spacing())
}

fn derivative(f: &GridFunction) -> Vec<C64> {
    let s = &f.samples;
    let n = s.len();
    let h = f.spec.spacing();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for i in 2..n.saturating_sub(2) {
        out[i] = (s[i - 2] - s[i - 1] * 8.0 + s[i + 1] * 8.0 - s[i + 2]) / (12.0 * h);
    }
    out
}

/// The pseudo-bosonic ladder operators realized on grid samples.
pub fn apply_pseudo_ladder(
    f: &GridFunction,
    alpha: f64,
    direction: LadderDirection,
) -> GridFunction {
    let d = derivative(f);
    let sign = match direction {
        LadderDirection::Lower => 1.0,
        LadderDirection::Raise => -1.0,
    };
    let shift = C64::new(0.0, -alpha / 2f64.sqrt());
    let r2 = 1.0 / 2f64.sqrt();
    let samples = f
        .samples
        .iter()
        .zip(&d)
        .enumerate()
        .map(|(i, (v, dv))| (v * f.spec.x(i) + dv * sign) * r2 + v * shift)
        .collect();
    let boundary = (f.boundary + STENCIL_BOUNDARY).min(f.samples.len() / 2);
    let mut samples: Vec<C64> = samples;
    let n = samples.len();
    for i in (0..boundary).chain(n - boundary..n) {
        samples[i] = C64::new(0.0, 0.0);
    }
    GridFunction {
        spec: f.spec,
        samples,
        boundary,
    }
}

pub fn tilted_ho_vectors(
    alpha: f64,
    sigma: f64,
    tau: f64,
    m_max: usize,
    spec: &GridSpec,
) -> Result<TiltedGridFamilies> {
    let even_shift = alpha + tau;
    let odd_shift = alpha + sigma;
    spec.require(2 * m_max + 1, even_shift)?;
    spec.require(2 * m_max + 1, odd_shift)?;
    let n_max = 2 * m_max + 1;
    let even_down = sample_shifted(n_max, even_shift, spec);
    let even_up = sample_shifted(n_max, -even_shift, spec);
    let odd_down = sample_shifted(n_max, odd_shift, spec);
    let odd_up = sample_shifted(n_max, -odd_shift, spec);
    let mut out = TiltedGridFamilies {
        phi: Vec::new(),
        psi: Vec::new(),
        chi: Vec::new(),
        eta: Vec::new(),
    };
    for m in 0..=m_max {
        let e = even_norm(m as u64).value();
        let o = odd_norm(m as u64).value();
        out.phi.push(even_down[2 * m].scale_real(e));
        out.psi.push(even_up[2 * m].scale_real(1.0 / e));
        out.chi.push(odd_down[2 * m + 1].scale_real(o));
        out.eta.push(odd_up[2 * m + 1].scale_real(1.0 / o));
    }
    Ok(out)
}

/// `max |<left_k, right_l> - delta_{kl}|` by quadrature.
pub fn grid_gram_deviation(left: &[GridFunction], right: &[GridFunction]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, u) in left.iter().enumerate() {
        for (l, v) in right.iter().enumerate() {
            let expected = if k == l { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(u, v)? - C64::new(expected, 0.0)).norm());
        }
    }
    Ok(worst)
}

impl TiltedGridFamilies {
    /// `(<phi~, psi~>, <chi~, eta~>)` deviations from the identity.
    pub fn pair_residuals(&self) -> Result<(f64, f64)> {
        Ok((
            grid_gram_deviation(&self.phi, &self.psi)?,
            grid_gram_deviation(&self.chi, &self.eta)?,
        ))
    }

    /// `max |<phi~_m, eta~_l>|` over all members.
    pub fn cross_pairing(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for u in &self.phi {
            for v in &self.eta {
                worst = worst.max(inner_product(u, v)?.norm());
            }
        }
        Ok(worst)
    }
}

/// Coordinates `<dual_n, f>` of `f` against a dual family.
pub fn grid_to_fock(f: &GridFunction, dual: &[GridFunction]) -> Result<FockVector> {
    let coords: Vec<C64> = dual
        .iter()
        .map(|d| inner_product(d, f))
        .collect::<Result<_>>()?;
    FockVector::from_slice(&coords)
}

/// Checks `c phi~_m = 2m/(2m-1) chi~_{m-1}` through pseudo-coordinates.
///
/// `c = V_{sigma - tau} (c_0 - i(alpha + tau)/sqrt 2)` leaves the real axis when
/// `sigma != tau`, so the ladder part is applied on the grid and the translation
/// is accounted for by reading coordinates in the two shifted bases.
pub fn c_bridge_residual(
    alpha: f64,
    sigma: f64,
    tau: f64,
    m_max: usize,
    spec: &GridSpec,
) -> Result<f64> {
    let tilted = tilted_ho_vectors(alpha, sigma, tau, m_max, spec)?;
    let n_max = 2 * m_max + 1;
    let even_dual = sample_shifted(n_max, -(alpha + tau), spec);
    let odd_dual = sample_shifted(n_max, -(alpha + sigma), spec);
    let mut worst: f64 = 0.0;
    for m in 1..=m_max {
        let lowered = apply_pseudo_ladder(&tilted.phi[m], alpha + tau, LadderDirection::Lower);
        let got = grid_to_fock(&lowered, &even_dual)?;
        let coeff = 2.0 * m as f64 / (2.0 * m as f64 - 1.0);
        let want = grid_to_fock(&tilted.chi[m - 1].scale_real(coeff), &odd_dual)?;
        worst = worst.max(got.distance(&want));
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BridgeResiduals {
    /// `max_n` of the largest coordinate error between the grid `phi_n` expanded
    /// in `e_k` and the matrix `phi_n`.
    pub phi_coordinates: f64,
    /// Same for `psi_n` against the matrix `Psi_n`.
    pub psi_coordinates: f64,
    /// `e_k` coordinates of the grid `a f` against the matrix `a` applied to the
    /// coordinates of `f`, for `f = phi_n`, `n < n_max`, relative to
    /// `max(1, |expected|)` like the grid ladder check.
    pub ladder_round_trip: f64,
}

impl BridgeResiduals {
    pub fn max(&self) -> f64 {
        self.phi_coordinates
            .max(self.psi_coordinates)
            .max(self.ladder_round_trip)
    }
}

/// Expands the sampled `phi_n`, `psi_n` in the orthonormal `e_k` (`k < dim`) and
/// compares them with the matrix families of `a = c_0 - i alpha / sqrt 2`.
pub fn matrix_bridge(
    alpha: f64,
    n_max: usize,
    dim: usize,
    spec: &GridSpec,
) -> Result<BridgeResiduals> {
    use crate::pseudoboson::{build_families, vacua, PBPair};
    let pair = PBPair::complex_shifted(dim, alpha)?;
    let vac = vacua(&pair, crate::fock::DEFAULT_KERNEL_TOL)?;
    let fam = build_families(&pair, &vac, n_max)?;
    let grid = shifted_family(n_max, alpha, spec)?;
    let e_basis = sample_shifted(dim - 1, 0.0, spec);
    let coord_err = |grid_fs: &[GridFunction], matrix: &[FockVector]| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (g, v) in grid_fs.iter().zip(matrix) {
            worst = worst.max(grid_to_fock(g, &e_basis)?.sub(v).max_abs());
        }
        Ok(worst)
    };
    let phi_coordinates = coord_err(&grid.phi, &fam.phi)?;
    let psi_coordinates = coord_err(&grid.psi, &fam.psi)?;
    let mut ladder_round_trip: f64 = 0.0;
    for f in grid.phi.iter().take(n_max) {
        let lowered = grid_to_fock(
            &apply_pseudo_ladder(f, alpha, LadderDirection::Lower),
            &e_basis,
        )?;
        let via_matrix = pair.a.apply(&grid_to_fock(f, &e_basis)?)?;
        let scale = via_matrix.max_abs().max(1.0);
        ladder_round_trip = ladder_round_trip.max(lowered.sub(&via_matrix).max_abs() / scale);
    }
    Ok(BridgeResiduals {
        phi_coordinates,
        psi_coordinates,
        ladder_round_trip,
    })
}

fn format_param(v: f64) -> String {
    format!("{v}")
}

/// Writes one CSV per function, named `{family}_{index}_{alpha}_{shift}.csv`,
/// with columns `x,re,im` and one row per grid point.
pub fn write_family_csv(
    dir: &Path,
    family: &str,
    functions: &[GridFunction],
    alpha: f64,
    shift: f64,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(functions.len());
    for (index, f) in functions.iter().enumerate() {
        let name = format!(
            "{family}_{index}_{}_{}.csv",
            format_param(alpha),
            format_param(shift)
        );
        let path = dir.join(name);
        let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(&path)?));
        writer.write_record(["x", "re", "im"])?;
        for (i, z) in f.samples.iter().enumerate() {
            writer.write_record([
                format!("{:.17e}", f.spec.x(i)),
                format!("{:.17e}", z.re),
                format!("{:.17e}", z.im),
            ])?;
        }
        writer.flush()?;
        writer.into_inner().map_err(|e| e.into_error())?.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(12.0, 2001).unwrap()
    }

    #[test]
    fn hermite_basics() {
        let e0 = hermite_eigenfunction(0, C64::new(0.0, 0.0));
        assert!((e0.re - 0.7511255).abs() < 1e-7);
        for z in [C64::new(0.3, 0.2), C64::new(-1.1, 0.7), C64::new(2.0, -0.4)] {
            assert!((hermite_eigenfunction(1, -z) + hermite_eigenfunction(1, z)).norm() < 1e-15);
        }
        let z = C64::new(1.0, 0.5);
        let h5 = z.powu(5) * 32.0 - z.powu(3) * 160.0 + z * 120.0;
        assert!((hermite_polynomial(5, z) - h5).norm() < 1e-12 * h5.norm());
        let norm = (32.0 * 120.0 * std::f64::consts::PI.sqrt()).sqrt();
        let direct = h5 * (-z * z / 2.0).exp() / norm;
        let rec = hermite_eigenfunction(5, z);
        assert!((rec - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0.0, 10).is_err());
        assert!(GridSpec::new(1.0, 1).is_err());
        let spec = GridSpec::new(4.0, 101).unwrap();
        assert!(matches!(
            shifted_family(10, 0.5, &spec),
            Err(Error::UnderResolved { .. })
        ));
        assert!(grid().resolves(10, 0.5));
    }

    #[test]
    fn quadrature_basics() {
        let fam = shifted_family(10, 0.0, &grid()).unwrap();
        assert!((inner_product(&fam.phi[0], &fam.phi[0]).unwrap() - 1.0).norm() < 1e-10);
        assert!(inner_product(&fam.phi[0], &fam.phi[1]).unwrap().norm() < 1e-12);
        assert_eq!(fam.phi, fam.psi);
    }

    #[test]
    fn shifted_biorthonormality() {
        let fam = shifted_family(10, 0.5, &grid()).unwrap();
        assert!(grid_gram_deviation(&fam.phi, &fam.psi).unwrap() < 1e-8);
        for (p, q) in fam.phi.iter().zip(&fam.psi) {
            for (a, b) in p.samples().iter().zip(q.samples()) {
                assert!((a.conj() - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn ladder_on_grid() {
        let alpha = 0.5;
        let fam = shifted_family(9, alpha, &grid()).unwrap();
        let a0 = apply_pseudo_ladder(&fam.phi[0], alpha, LadderDirection::Lower);
        assert!(a0.interior_max_abs() < 1e-6);
        for n in 1..=8 {
            let lowered = apply_pseudo_ladder(&fam.phi[n], alpha, LadderDirection::Lower);
            let expected = fam.phi[n - 1].scale_real((n as f64).sqrt());
            assert!(
                lowered.scaled_interior_distance(&expected).unwrap() < 1e-6,
                "n = {n}"
            );
            let raised = apply_pseudo_ladder(&fam.phi[n], alpha, LadderDirection::Raise);
            let expected = fam.phi[n + 1].scale_real(((n + 1) as f64).sqrt());
            assert!(
                raised.scaled_interior_distance(&expected).unwrap() < 1e-6,
                "n = {n}"
            );
        }
    }

    #[test]
    fn function_space_commutator() {
        let alpha = 0.5;
        let fam = shifted_family(6, alpha, &grid()).unwrap();
        for f in fam.phi.iter().take(6) {
            let ab = apply_pseudo_ladder(
                &apply_pseudo_ladder(f, alpha, LadderDirection::Raise),
                alpha,
                LadderDirection::Lower,
            );
            let ba = apply_pseudo_ladder(
                &apply_pseudo_ladder(f, alpha, LadderDirection::Lower),
                alpha,
                LadderDirection::Raise,
            );
            let defect = ab.add(&ba.scale_real(-1.0)).unwrap();
            assert_eq!(defect.boundary(), 4);
            assert!(defect.interior_distance(f).unwrap() < 1e-5);
        }
    }

    #[test]
    fn tilted_pairings() {
        let spec = GridSpec::new(14.0, 4001).unwrap();
        let t = tilted_ho_vectors(0.3, 0.5, 0.2, 6, &spec).unwrap();
        let (a, b) = t.pair_residuals().unwrap();
        assert!(a < 1e-8 && b < 1e-8, "{a} {b}");
        assert!(t.cross_pairing().unwrap() > 1e-4);
        let untilted = tilted_ho_vectors(0.3, 0.0, 0.0, 3, &spec).unwrap();
        let base = sample_shifted(7, 0.3, &spec);
        let diff = untilted.phi[2].interior_distance(&base[4].scale_real(even_norm(2).value()));
        assert!(diff.unwrap() < 1e-15);
        assert!(c_bridge_residual(0.3, 0.5, 0.2, 5, &spec).unwrap() < 1e-6);
    }

    #[test]
    fn grid_to_fock_unit_vectors() {
        let fam = shifted_family(10, 0.5, &grid()).unwrap();
        let c = grid_to_fock(&fam.phi[3], &fam.psi).unwrap();
        assert!(c.distance(&FockVector::basis(11, 3)) < 1e-8);
    }

    #[test]
    fn bridge_to_matrices() {
        let r = matrix_bridge(0.5, 10, 64, &grid()).unwrap();
        assert!(r.max() < 1e-6, "{r:?}");
    }

    #[test]
    fn shift_group() {
        for x in [-2.0, 0.1, 3.3] {
            for n in [0, 3, 7] {
                let once = hermite_eigenfunction(
                    n,
                    C64::new(x, 0.0) - C64::new(0.0, 0.3) - C64::new(0.0, 0.4),
                );
                let joint = hermite_eigenfunction(n, C64::new(x, -0.7));
                assert!((once - joint).norm() < 1e-10);
            }
        }
    }
}
