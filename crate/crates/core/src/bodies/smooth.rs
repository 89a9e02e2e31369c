use nalgebra::DMatrix;
use statrs::function::gamma::gamma;

use super::Vector;
use crate::error::{Error, Result};

/// `{x : x^T Q x <= 1}` for symmetric positive-definite `Q`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    shape: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(shape: DMatrix<f64>) -> Result<Self> {
        if !shape.is_square() || shape.nrows() == 0 {
            return Err(Error::InvalidInput("shape matrix must be square and non-empty".into()));
        }
        if shape.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite shape matrix".into()));
        }
        let asym = (&shape - shape.transpose()).amax();
        if asym > 1e-12 * shape.amax().max(1.0) {
            return Err(Error::InvalidInput(format!("shape matrix not symmetric (deviation {asym:.2e})")));
        }
        let shape = (&shape + shape.transpose()) * 0.5;
        let eig = shape.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::Degenerate("shape matrix is not positive definite".into()));
        }
        let inverse = shape
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Degenerate("Cholesky factorisation failed".into()))?
            .inverse();
        let inverse = (&inverse + inverse.transpose()) * 0.5;
        Ok(Self { shape, inverse })
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn with_semiaxes(axes: &[f64]) -> Result<Self> {
        if axes.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::InvalidInput("semi-axes must be positive".into()));
        }
        Self::new(DMatrix::from_diagonal(&Vector::from_iterator(axes.len(), axes.iter().map(|a| 1.0 / (a * a)))))
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::with_semiaxes(&vec![radius; dim])
    }

    pub fn dim(&self) -> usize {
        self.shape.nrows()
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn inverse_shape(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub(crate) fn gauge(&self, x: &Vector) -> f64 {
        x.dot(&(&self.shape * x)).max(0.0).sqrt()
    }

    pub(crate) fn support(&self, u: &Vector) -> f64 {
        u.dot(&(&self.inverse * u)).max(0.0).sqrt()
    }

    pub(crate) fn gauge_gradient(&self, x: &Vector) -> Vector {
        let qx = &self.shape * x;
        let g = x.dot(&qx).sqrt();
        qx / g
    }

    pub(crate) fn support_point(&self, u: &Vector) -> Vector {
        let w = &self.inverse * u;
        let h = u.dot(&w).sqrt();
        w / h
    }

    /// `kappa_n / sqrt(det Q)`.
    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) / self.shape.determinant().sqrt()
    }
}

/// `{x : ||x||_p <= radius}` for `1 < p < inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct PBall {
    pub p: f64,
    pub radius: f64,
    pub dim: usize,
}

impl PBall {
    pub fn new(p: f64, radius: f64, dim: usize) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidInput(format!("p-ball exponent must lie in (1, inf), got {p}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self { p, radius, dim })
    }

    pub fn conjugate_exponent(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub(crate) fn gauge(&self, x: &Vector) -> f64 {
        p_norm(x, self.p) / self.radius
    }

    pub(crate) fn support(&self, u: &Vector) -> f64 {
        self.radius * p_norm(u, self.conjugate_exponent())
    }

    pub(crate) fn gauge_gradient(&self, x: &Vector) -> Vector {
        p_norm_gradient(x, self.p) / self.radius
    }

    pub(crate) fn support_point(&self, u: &Vector) -> Vector {
        p_norm_gradient(u, self.conjugate_exponent()) * self.radius
    }

    /// `(2 Gamma(1 + 1/p))^n / Gamma(1 + n/p) * r^n`.
    pub fn volume(&self) -> f64 {
        let n = self.dim as f64;
        (2.0 * gamma(1.0 + 1.0 / self.p)).powf(n) / gamma(1.0 + n / self.p) * self.radius.powf(n)
    }
}

fn p_norm(x: &Vector, p: f64) -> f64 {
    let m = x.amax();
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|c| (c.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn p_norm_gradient(x: &Vector, p: f64) -> Vector {
    let norm = p_norm(x, p);
    if norm == 0.0 {
        return Vector::zeros(x.len());
    }
    x.map(|c| c.signum() * (c.abs() / norm).powf(p - 1.0))
}

/// Volume of the Euclidean unit ball, `pi^{n/2} / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // kappa_n = kappa_{n-2} * 2 pi / n, from kappa_0 = 1 and kappa_1 = 2
    let (mut k, mut v) = if n.is_multiple_of(2) { (0, 1.0) } else { (1, 2.0) };
    while k < n {
        k += 2;
        v *= std::f64::consts::TAU / k as f64;
    }
    v
}
