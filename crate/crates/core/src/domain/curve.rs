use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::gauss::gauss_legendre;
use super::DomainError;

const I: Complex64 = Complex64::new(0.0, 1.0);
const TABLE_PANELS: usize = 128;
const PANEL_ORDER: usize = 16;
const SAMPLE_COUNT: usize = 1024;

/// Periodic parametrization `t ↦ (z(t), z'(t))` on `[0, 2π)`, counterclockwise.
pub type Parametrization = Arc<dyn Fn(f64) -> (Complex64, Complex64) + Send + Sync>;

#[derive(Clone)]
pub enum CurveKind {
    Disk {
        center: Complex64,
        radius: f64,
    },
    Ellipse {
        center: Complex64,
        a: f64,
        b: f64,
        rot: f64,
    },
    Custom {
        param: Parametrization,
        convex: bool,
    },
}

impl fmt::Debug for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Disk { center, radius } => f
                .debug_struct("Disk")
                .field("center", center)
                .field("radius", radius)
                .finish(),
            CurveKind::Ellipse { center, a, b, rot } => f
                .debug_struct("Ellipse")
                .field("center", center)
                .field("a", a)
                .field("b", b)
                .field("rot", rot)
                .finish(),
            CurveKind::Custom { convex, .. } => {
                f.debug_struct("Custom").field("convex", convex).finish()
            }
        }
    }
}

/// Cumulative arc length at equispaced parameter panels, integrated by
/// Gauss–Legendre on each panel.
#[derive(Debug, Clone)]
struct ArcTable {
    cumulative: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// A simple closed smooth curve with an arc-length parametrization.
#[derive(Debug, Clone)]
pub struct Curve {
    kind: CurveKind,
    length: f64,
    table: Option<ArcTable>,
    center: Complex64,
}

impl Curve {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self, DomainError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DomainError::NonPositiveSize { value: radius });
        }
        Ok(Self {
            kind: CurveKind::Disk { center, radius },
            length: TAU * radius,
            table: None,
            center,
        })
    }

    /// Ellipse with semi-axes `a ≥ b > 0`, rotated by `rot` radians.
    pub fn ellipse(center: Complex64, a: f64, b: f64, rot: f64) -> Result<Self, DomainError> {
        for v in [a, b] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DomainError::NonPositiveSize { value: v });
            }
        }
        if a < b {
            return Err(DomainError::AxisOrder { a, b });
        }
        Ok(Self::parametric(
            CurveKind::Ellipse { center, a, b, rot },
            center,
        ))
    }

    /// Custom curve; must be simple, closed, smooth and counterclockwise.
    pub fn custom(param: Parametrization) -> Result<Self, DomainError> {
        let samples: Vec<Complex64> = (0..SAMPLE_COUNT)
            .map(|k| param(TAU * k as f64 / SAMPLE_COUNT as f64).0)
            .collect();
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(DomainError::NonFiniteCurve);
        }
        let area = signed_area(&samples);
        if area <= 0.0 {
            return Err(DomainError::Orientation { signed_area: area });
        }
        let centroid = polygon_centroid(&samples, area);
        let convex = polygon_is_convex(&samples);
        Ok(Self::parametric(
            CurveKind::Custom { param, convex },
            centroid,
        ))
    }

    fn parametric(kind: CurveKind, center: Complex64) -> Self {
        let (nodes, weights) = gauss_legendre(PANEL_ORDER);
        let mut curve = Self {
            kind,
            length: 0.0,
            table: None,
            center,
        };
        let h = TAU / TABLE_PANELS as f64;
        let mut cumulative = Vec::with_capacity(TABLE_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for j in 0..TABLE_PANELS {
            acc += curve.panel_length(&nodes, &weights, h * j as f64, h * (j + 1) as f64);
            cumulative.push(acc);
        }
        curve.length = acc;
        curve.table = Some(ArcTable {
            cumulative,
            nodes,
            weights,
        });
        curve
    }

    fn panel_length(&self, nodes: &[f64], weights: &[f64], t0: f64, t1: f64) -> f64 {
        let half = 0.5 * (t1 - t0);
        let mid = 0.5 * (t1 + t0);
        nodes
            .iter()
            .zip(weights)
            .map(|(x, w)| w * self.raw(mid + half * x).1.norm())
            .sum::<f64>()
            * half
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Representative interior point (center for disks and ellipses, centroid otherwise).
    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// Characteristic radius, used to normalize centered monomials.
    pub fn scale(&self) -> f64 {
        match &self.kind {
            CurveKind::Disk { radius, .. } => *radius,
            CurveKind::Ellipse { a, .. } => *a,
            CurveKind::Custom { .. } => self.length / TAU,
        }
    }

    pub fn is_convex(&self) -> bool {
        match &self.kind {
            CurveKind::Disk { .. } | CurveKind::Ellipse { .. } => true,
            CurveKind::Custom { convex, .. } => *convex,
        }
    }

    /// Point and derivative in the native parameter `t ∈ [0, 2π)`.
    fn raw(&self, t: f64) -> (Complex64, Complex64) {
        match &self.kind {
            CurveKind::Disk { center, radius } => {
                let e = Complex64::from_polar(1.0, t);
                (center + e * *radius, I * e * *radius)
            }
            CurveKind::Ellipse { center, a, b, rot } => {
                let r = Complex64::from_polar(1.0, *rot);
                let (s, c) = t.sin_cos();
                (
                    center + r * Complex64::new(a * c, b * s),
                    r * Complex64::new(-a * s, b * c),
                )
            }
            CurveKind::Custom { param, .. } => param(t),
        }
    }

    fn arc_length_at(&self, t: f64) -> f64 {
        let table = self.table.as_ref().expect("parametric curve has a table");
        let h = TAU / TABLE_PANELS as f64;
        let j = ((t / h).floor() as usize).min(TABLE_PANELS - 1);
        let t0 = h * j as f64;
        table.cumulative[j] + self.panel_length(&table.nodes, &table.weights, t0, t)
    }

    /// Native parameter for arc length `s`, by Newton on the arc-length table.
    fn parameter_at(&self, s: f64) -> f64 {
        let table = self.table.as_ref().expect("parametric curve has a table");
        let s = s.rem_euclid(self.length);
        let h = TAU / TABLE_PANELS as f64;
        let j = table
            .cumulative
            .partition_point(|&c| c <= s)
            .saturating_sub(1)
            .min(TABLE_PANELS - 1);
        let frac = (s - table.cumulative[j]) / (table.cumulative[j + 1] - table.cumulative[j]);
        let mut t = h * (j as f64 + frac);
        for _ in 0..12 {
            let speed = self.raw(t).1.norm();
            let step = (self.arc_length_at(t) - s) / speed;
            t = (t - step).clamp(0.0, TAU);
            if step.abs() < 1e-15 {
                break;
            }
        }
        t
    }

    /// `σ(s)` for arc length `s ∈ [0, ℓ)`.
    pub fn point(&self, s: f64) -> Complex64 {
        self.point_and_tangent(s).0
    }

    /// Unit tangent `σ'(s)`.
    pub fn tangent(&self, s: f64) -> Complex64 {
        self.point_and_tangent(s).1
    }

    /// Outward unit normal `σ'(s)/i`.
    pub fn normal(&self, s: f64) -> Complex64 {
        self.tangent(s) * -I
    }

    pub fn point_and_tangent(&self, s: f64) -> (Complex64, Complex64) {
        match &self.kind {
            CurveKind::Disk { center, radius } => {
                let e = Complex64::from_polar(1.0, s / radius);
                (center + e * *radius, I * e)
            }
            _ => {
                let t = self.parameter_at(s);
                let (z, dz) = self.raw(t);
                (z, dz / dz.norm())
            }
        }
    }

    /// Equispaced samples in the native parameter; cheap, for geometry checks.
    pub(crate) fn samples(&self, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|k| self.raw(TAU * k as f64 / count as f64).0)
            .collect()
    }

    /// Whether `z` lies strictly inside the region bounded by the curve.
    pub fn encloses(&self, z: Complex64) -> bool {
        match &self.kind {
            CurveKind::Disk { center, radius } => (z - center).norm() < *radius,
            CurveKind::Ellipse { center, a, b, rot } => {
                let w = (z - center) * Complex64::from_polar(1.0, -rot);
                (w.re / a).powi(2) + (w.im / b).powi(2) < 1.0
            }
            CurveKind::Custom { .. } => winding_number(&self.samples(4 * SAMPLE_COUNT), z) != 0,
        }
    }

    /// Euclidean distance from `z` to the curve.
    pub fn distance(&self, z: Complex64) -> f64 {
        match &self.kind {
            CurveKind::Disk { center, radius } => ((z - center).norm() - radius).abs(),
            _ => {
                let n = SAMPLE_COUNT;
                let h = TAU / n as f64;
                let (k, _) = (0..n)
                    .map(|k| (k, (self.raw(h * k as f64).0 - z).norm()))
                    .fold(
                        (0, f64::INFINITY),
                        |acc, x| if x.1 < acc.1 { x } else { acc },
                    );
                let centre = h * k as f64;
                golden_min(
                    |t| (self.raw(t).0 - z).norm(),
                    centre - h,
                    centre + h,
                    1e-12,
                )
            }
        }
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 > f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.min(f2)
}

pub(crate) fn signed_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let a = poly[k];
            let b = poly[(k + 1) % n];
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
        * 0.5
}

fn polygon_centroid(poly: &[Complex64], area: f64) -> Complex64 {
    let n = poly.len();
    let mut c = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let cross = a.re * b.im - b.re * a.im;
        c += (a + b) * cross;
    }
    c / (6.0 * area)
}

fn polygon_is_convex(poly: &[Complex64]) -> bool {
    let n = poly.len();
    (0..n).all(|k| {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let c = poly[(k + 2) % n];
        let u = b - a;
        let v = c - b;
        u.re * v.im - u.im * v.re >= -1e-12 * u.norm() * v.norm()
    })
}

pub(crate) fn winding_number(poly: &[Complex64], z: Complex64) -> i64 {
    let n = poly.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = poly[k] - z;
        let b = poly[(k + 1) % n] - z;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}
