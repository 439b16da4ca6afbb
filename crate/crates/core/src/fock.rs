//! Dense matrix algebra on a truncated Fock space.
//!
//! Every operator carries a declared bandwidth `b`: in the untruncated theory
//! it maps the basis vector `e_n` into `span{e_{n-b}, ..., e_{n+b}}`. Products
//! add bandwidths, and an identity built from operators of total bandwidth `B`
//! is only compared on the leading `N - B` block, where truncation of the
//! ladder matrices has no effect.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative singular-value threshold below which a direction counts as kernel.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    entries: DMatrix<C64>,
    bandwidth: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    coords: DVector<C64>,
}

fn all_finite<'a>(values: impl IntoIterator<Item = &'a C64>) -> bool {
    values
        .into_iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
}

fn detect_bandwidth(entries: &DMatrix<C64>) -> usize {
    let mut band = 0;
    for j in 0..entries.ncols() {
        for i in 0..entries.nrows() {
            if entries[(i, j)] != C64::new(0.0, 0.0) {
                band = band.max(i.abs_diff(j));
            }
        }
    }
    band
}

impl TruncatedOperator {
    /// Wraps a square matrix with a declared bandwidth, validating every invariant.
    pub fn new(entries: DMatrix<C64>, bandwidth: usize) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: entries.ncols(),
            });
        }
        if !all_finite(entries.iter()) {
            return Err(Error::NonFinite);
        }
        if bandwidth > dim {
            return Err(Error::InvalidArgument(format!(
                "bandwidth {bandwidth} exceeds dimension {dim}"
            )));
        }
        for j in 0..dim {
            for i in 0..dim {
                if i.abs_diff(j) > bandwidth && entries[(i, j)] != C64::new(0.0, 0.0) {
                    return Err(Error::BandwidthViolation {
                        declared: bandwidth,
                        row: i,
                        col: j,
                    });
                }
            }
        }
        Ok(Self { entries, bandwidth })
    }

    /// Wraps a square matrix and infers the tightest bandwidth from its sparsity.
    pub fn from_matrix(entries: DMatrix<C64>) -> Result<Self> {
        let band = detect_bandwidth(&entries);
        Self::new(entries, band)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            entries: DMatrix::identity(dim, dim),
            bandwidth: 0,
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            entries: DMatrix::zeros(dim, dim),
            bandwidth: 0,
        })
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Self::new(
            DMatrix::from_diagonal(&DVector::from_column_slice(values)),
            0,
        )
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Bandwidth read off the actual nonzero pattern (never larger than the declared one).
    pub fn effective_bandwidth(&self) -> usize {
        detect_bandwidth(&self.entries)
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    fn capped(&self, band: usize) -> usize {
        band.min(self.dim() - 1)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            bandwidth: self.bandwidth,
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = &self.entries * &other.entries;
        if !all_finite(entries.iter()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            entries,
            bandwidth: self.capped(self.bandwidth + other.bandwidth),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries + &other.entries,
            bandwidth: self.bandwidth.max(other.bandwidth),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries - &other.entries,
            bandwidth: self.bandwidth.max(other.bandwidth),
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            entries: &self.entries * factor,
            bandwidth: self.bandwidth,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `self + shift * 1`.
    pub fn shift(&self, shift: C64) -> Self {
        let mut entries = self.entries.clone();
        for i in 0..self.dim() {
            entries[(i, i)] += shift;
        }
        Self {
            entries,
            bandwidth: self.bandwidth,
        }
    }

    pub fn shift_real(&self, shift: f64) -> Self {
        self.shift(C64::new(shift, 0.0))
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        Ok(FockVector {
            coords: &self.entries * &v.coords,
        })
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.entries
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect()
    }

    /// Spectral condition number `sigma_max / sigma_min` (infinite when singular).
    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Inverse with a condition-number cap; bandwidth is read off the result.
    pub fn inverse(&self, condition_cap: f64) -> Result<Self> {
        let condition = self.condition_number();
        if condition.is_nan() || condition >= condition_cap {
            return Err(Error::IllConditioned {
                condition,
                cap: condition_cap,
            });
        }
        if self.bandwidth == 0 {
            let diag: Vec<C64> = (0..self.dim())
                .map(|i| C64::new(1.0, 0.0) / self.entries[(i, i)])
                .collect();
            return Self::diagonal(&diag);
        }
        let inv = self
            .entries
            .clone()
            .try_inverse()
            .ok_or(Error::IllConditioned {
                condition,
                cap: condition_cap,
            })?;
        Self::from_matrix(inv)
    }

    /// Restriction to the top-left `size x size` block.
    pub fn leading_block(&self, size: usize) -> DMatrix<C64> {
        self.entries.view((0, 0), (size, size)).into_owned()
    }
}

impl FockVector {
    pub fn new(coords: DVector<C64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if !all_finite(coords.iter()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn from_slice(values: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(values))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: DVector::zeros(dim),
        }
    }

    /// Unit coordinate vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut coords = DVector::zeros(dim);
        coords[index] = C64::new(1.0, 0.0);
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<C64> {
        &self.coords
    }

    pub fn get(&self, i: usize) -> C64 {
        self.coords[i]
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.coords.dotc(&other.coords)
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            coords: &self.coords * factor,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: &self.coords + &other.coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coords: &self.coords - &other.coords,
        }
    }

    /// Largest modulus among coordinates with index `>= from`.
    pub fn tail_max_abs(&self, from: usize) -> f64 {
        self.coords
            .iter()
            .skip(from)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-modulus distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }
}

/// `c_0` on the first `dim` Fock states: entry `(n-1, n) = sqrt(n)`.
pub fn bosonic_annihilator(dim: usize) -> Result<TruncatedOperator> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    TruncatedOperator::new(m, 1.min(dim))
}

pub fn bosonic_creator(dim: usize) -> Result<TruncatedOperator> {
    Ok(bosonic_annihilator(dim)?.adjoint())
}

pub fn adjoint(op: &TruncatedOperator) -> TruncatedOperator {
    op.adjoint()
}

pub fn compose(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    a.compose(b)
}

pub fn commutator(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    ab.sub(&ba)
}

/// Max entry of `|A - B|` over indices `< N - guard`.
pub fn leading_block_residual(
    a: &TruncatedOperator,
    b: &TruncatedOperator,
    guard: usize,
) -> Result<f64> {
    a.check_dim(b)?;
    let n = a.dim();
    if guard >= n {
        return Err(Error::GuardTooLarge { guard, dim: n });
    }
    let size = n - guard;
    let mut worst: f64 = 0.0;
    for j in 0..size {
        for i in 0..size {
            worst = worst.max((a.entries[(i, j)] - b.entries[(i, j)]).norm());
        }
    }
    Ok(worst)
}

/// Guard-block residual of an identity `lhs = rhs`, using the larger declared
/// bandwidth of the two sides as the guard.
pub fn identity_residual(lhs: &TruncatedOperator, rhs: &TruncatedOperator) -> Result<f64> {
    let guard = lhs.bandwidth().max(rhs.bandwidth());
    leading_block_residual(lhs, rhs, guard)
}

/// Orthonormal basis of the numerical kernel: right singular directions with
/// `sigma < tol * sigma_max`.
pub fn nullspace(op: &TruncatedOperator, tol: f64) -> Result<Vec<FockVector>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "kernel tolerance must be positive, got {tol}"
        )));
    }
    let n = op.dim();
    let svd = op.entries.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut kernel = Vec::new();
    for (k, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma_max == 0.0 || sigma < tol * sigma_max {
            let coords = DVector::from_iterator(n, v_t.row(k).iter().map(|z| z.conj()));
            kernel.push(FockVector { coords });
        }
    }
    Ok(kernel)
}
