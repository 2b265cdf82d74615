//! Geometry of the spectral set: oriented boundary components with
//! arc-length parametrizations, trapezoid quadrature, containment and
//! admissibility checks.
//!
//! Every component is oriented counterclockwise and bounds its own interior,
//! so the outward normal at `σ(s)` is `σ'(s)/i`.

mod curve;
mod gauss;

use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};

pub use curve::{Curve, CurveKind, Parametrization};

pub const MIN_NODES: usize = 16;
pub const DEFAULT_NODES: usize = 256;
/// Admissibility margins below this fraction of the diameter count as failures.
pub const MARGIN_FRACTION: f64 = 1e-6;
/// Points closer than this to the boundary are ambiguous.
pub const BOUNDARY_TOL: f64 = 1e-12;

const GEOMETRY_SAMPLES: usize = 512;
const RANGE_ANGLES: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("sizes must be positive and finite, got {value}")]
    NonPositiveSize { value: f64 },
    #[error("ellipse requires a >= b, got a = {a}, b = {b}")]
    AxisOrder { a: f64, b: f64 },
    #[error("curve must be counterclockwise (signed area {signed_area:.3e})")]
    Orientation { signed_area: f64 },
    #[error("custom curve produced non-finite points")]
    NonFiniteCurve,
    #[error("components {first} and {second} overlap or are nested")]
    Overlapping { first: usize, second: usize },
    #[error("domain needs at least one component")]
    Empty,
    #[error("at least {min} nodes per component required, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("point {point} lies within {distance:.3e} of the boundary")]
    OnBoundary { point: Complex64, distance: f64 },
    #[error("numerical-range admissibility needs a single convex component")]
    NotConvex,
    #[error("norm-circle admissibility needs a single disk centered at the origin")]
    NotOriginDisk,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Bounded open set with smooth boundary, as a disjoint union of curve interiors.
#[derive(Debug, Clone)]
pub struct Domain {
    components: Vec<Curve>,
    diameter: f64,
}

impl Domain {
    pub fn new(components: Vec<Curve>) -> Result<Self, DomainError> {
        if components.is_empty() {
            return Err(DomainError::Empty);
        }
        let samples: Vec<Vec<Complex64>> = components
            .iter()
            .map(|c| c.samples(GEOMETRY_SAMPLES))
            .collect();
        for i in 0..components.len() {
            for j in 0..components.len() {
                if i == j {
                    continue;
                }
                let touching = samples[i].iter().any(|&z| components[j].encloses(z))
                    || samples[i]
                        .iter()
                        .any(|&z| components[j].distance(z) <= BOUNDARY_TOL)
                    || components[j].encloses(components[i].center());
                if touching {
                    return Err(DomainError::Overlapping {
                        first: i.min(j),
                        second: i.max(j),
                    });
                }
            }
        }
        let flat: Vec<Complex64> = samples.into_iter().flatten().collect();
        let mut diameter: f64 = 0.0;
        for (k, a) in flat.iter().enumerate() {
            for b in &flat[k + 1..] {
                diameter = diameter.max((a - b).norm());
            }
        }
        Ok(Self {
            components,
            diameter,
        })
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self, DomainError> {
        Self::new(vec![Curve::disk(center, radius)?])
    }

    pub fn ellipse(center: Complex64, a: f64, b: f64, rot: f64) -> Result<Self, DomainError> {
        Self::new(vec![Curve::ellipse(center, a, b, rot)?])
    }

    pub fn union_of_disks(disks: &[(Complex64, f64)]) -> Result<Self, DomainError> {
        Self::new(
            disks
                .iter()
                .map(|&(c, r)| Curve::disk(c, r))
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn components(&self) -> &[Curve] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Sampled diameter of the boundary.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// A single convex component.
    pub fn is_convex(&self) -> bool {
        self.components.len() == 1 && self.components[0].is_convex()
    }

    /// `Some(radius)` when the domain is one disk centered at the origin.
    pub fn origin_disk_radius(&self) -> Option<f64> {
        match self.components.as_slice() {
            [c] => match c.kind() {
                CurveKind::Disk { center, radius } if center.norm() <= 1e-14 * radius => {
                    Some(*radius)
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// `Some((center, radius))` when the domain is a single disk.
    pub fn single_disk(&self) -> Option<(Complex64, f64)> {
        match self.components.as_slice() {
            [c] => match c.kind() {
                CurveKind::Disk { center, radius } => Some((*center, *radius)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn quadrature(&self, nodes_per_component: usize) -> Result<Quadrature, DomainError> {
        Quadrature::new(self, nodes_per_component)
    }

    pub fn contains_point(&self, z: Complex64) -> Result<Containment, DomainError> {
        let mut nearest = f64::INFINITY;
        let mut component = None;
        for (k, c) in self.components.iter().enumerate() {
            nearest = nearest.min(c.distance(z));
            if c.encloses(z) {
                component = Some(k);
            }
        }
        if nearest <= BOUNDARY_TOL {
            return Err(DomainError::OnBoundary {
                point: z,
                distance: nearest,
            });
        }
        Ok(Containment {
            inside: component.is_some(),
            component,
            margin: if component.is_some() {
                nearest
            } else {
                -nearest
            },
        })
    }

    pub fn required_margin(&self) -> f64 {
        MARGIN_FRACTION * self.diameter
    }

    pub fn admissibility(
        &self,
        m: &ComplexMatrix,
        mode: AdmissibilityMode,
    ) -> Result<AdmissibilityReport, DomainError> {
        let required = self.required_margin();
        let points: Vec<Complex64> = match mode {
            AdmissibilityMode::Spectrum => linalg::spectrum(m)?,
            AdmissibilityMode::NumericalRange => {
                if !self.is_convex() {
                    return Err(DomainError::NotConvex);
                }
                linalg::numerical_range(m, RANGE_ANGLES)?.outer_vertices
            }
            AdmissibilityMode::NormCircle => {
                let radius = self
                    .origin_disk_radius()
                    .ok_or(DomainError::NotOriginDisk)?;
                let norm = linalg::op_norm(m)?;
                let margin = radius - norm;
                let passed = margin > required;
                return Ok(AdmissibilityReport {
                    mode,
                    passed,
                    min_margin: margin,
                    required_margin: required,
                    checked: vec![CheckedPoint {
                        point: Complex64::new(norm, 0.0),
                        margin,
                    }],
                });
            }
        };
        let checked: Vec<CheckedPoint> = points
            .into_iter()
            .map(|point| {
                let margin = match self.contains_point(point) {
                    Ok(c) => c.margin,
                    Err(_) => 0.0,
                };
                CheckedPoint { point, margin }
            })
            .collect();
        let min_margin = checked
            .iter()
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min);
        Ok(AdmissibilityReport {
            mode,
            passed: min_margin > required,
            min_margin,
            required_margin: required,
            checked,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Containment {
    pub inside: bool,
    pub component: Option<usize>,
    /// Distance to the nearest boundary point; positive inside, negative outside.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibilityMode {
    /// Every eigenvalue lies inside with margin.
    Spectrum,
    /// The closed numerical range lies inside a single convex component.
    NumericalRange,
    /// The domain is an origin-centered disk of radius larger than `‖M‖`.
    NormCircle,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CheckedPoint {
    pub point: Complex64,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub mode: AdmissibilityMode,
    pub passed: bool,
    pub min_margin: f64,
    pub required_margin: f64,
    pub checked: Vec<CheckedPoint>,
}

impl AdmissibilityReport {
    /// Human-readable list of points that failed the margin requirement.
    pub fn describe_failures(&self) -> String {
        let mut out = String::new();
        for c in self
            .checked
            .iter()
            .filter(|c| c.margin <= self.required_margin)
        {
            let _ = writeln!(
                out,
                "  point {:.6}{:+.6}i: margin {:.3e} (required > {:.3e})",
                c.point.re, c.point.im, c.margin, self.required_margin
            );
        }
        out
    }
}

/// One trapezoid node on a boundary component.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadNode {
    pub component: usize,
    pub s: f64,
    pub point: Complex64,
    pub tangent: Complex64,
    pub weight: f64,
}

impl QuadNode {
    /// Outward unit normal, `tangent / i`.
    #[inline]
    pub fn normal(&self) -> Complex64 {
        self.tangent * Complex64::new(0.0, -1.0)
    }
}

/// Composite trapezoid rule, equispaced in arc length on every component.
#[derive(Debug, Clone)]
pub struct Quadrature {
    nodes: Vec<QuadNode>,
    ranges: Vec<Range<usize>>,
    lengths: Vec<f64>,
    centers: Vec<Complex64>,
    scales: Vec<f64>,
}

impl Quadrature {
    pub fn new(dom: &Domain, nodes_per_component: usize) -> Result<Self, DomainError> {
        if nodes_per_component < MIN_NODES {
            return Err(DomainError::TooFewNodes {
                min: MIN_NODES,
                got: nodes_per_component,
            });
        }
        let mut nodes = Vec::with_capacity(nodes_per_component * dom.component_count());
        let mut ranges = Vec::new();
        for (c, curve) in dom.components().iter().enumerate() {
            let start = nodes.len();
            let len = curve.length();
            let w = len / nodes_per_component as f64;
            for i in 0..nodes_per_component {
                let s = w * i as f64;
                let (point, tangent) = curve.point_and_tangent(s);
                nodes.push(QuadNode {
                    component: c,
                    s,
                    point,
                    tangent,
                    weight: w,
                });
            }
            ranges.push(start..nodes.len());
        }
        Ok(Self {
            nodes,
            ranges,
            lengths: dom.components().iter().map(Curve::length).collect(),
            centers: dom.components().iter().map(Curve::center).collect(),
            scales: dom.components().iter().map(Curve::scale).collect(),
        })
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.ranges.len()
    }

    /// Index range of the nodes on component `c`.
    pub fn component_range(&self, c: usize) -> Range<usize> {
        self.ranges[c].clone()
    }

    pub fn component_length(&self, c: usize) -> f64 {
        self.lengths[c]
    }

    pub fn component_center(&self, c: usize) -> Complex64 {
        self.centers[c]
    }

    pub fn component_scale(&self, c: usize) -> f64 {
        self.scales[c]
    }

    /// Node spacing in arc length on component `c`.
    pub fn spacing(&self, c: usize) -> f64 {
        self.lengths[c] / self.ranges[c].len() as f64
    }

    /// `∮ g(σ) dσ` over the whole boundary.
    pub fn contour_integral(&self, g: impl Fn(&QuadNode) -> Complex64) -> Complex64 {
        self.nodes.iter().map(|n| g(n) * n.tangent * n.weight).sum()
    }

    /// `∮ g(σ(s)) ds` over the whole boundary.
    pub fn arc_integral(&self, g: impl Fn(&QuadNode) -> Complex64) -> Complex64 {
        self.nodes.iter().map(|n| g(n) * n.weight).sum()
    }

    /// CSV dump `component,s,re(sigma),im(sigma),weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,s,re(sigma),im(sigma),weight\n");
        for n in &self.nodes {
            let _ = writeln!(
                out,
                "{},{:.17e},{:.17e},{:.17e},{:.17e}",
                n.component, n.s, n.point.re, n.point.im, n.weight
            );
        }
        out
    }
}

/// JSON description of a domain.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainSpec {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    Union {
        disks: Vec<DiskSpec>,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
        #[serde(default)]
        rot: f64,
    },
}

/// Member of a union; a `"type": "disk"` tag is accepted and ignored.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiskSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

impl DomainSpec {
    fn curves(&self) -> Result<Vec<Curve>, DomainError> {
        Ok(match self {
            DomainSpec::Disk { center, radius } => {
                vec![Curve::disk(Complex64::new(center[0], center[1]), *radius)?]
            }
            DomainSpec::Ellipse { center, a, b, rot } => vec![Curve::ellipse(
                Complex64::new(center[0], center[1]),
                *a,
                *b,
                *rot,
            )?],
            DomainSpec::Union { disks } => disks
                .iter()
                .map(|d| Curve::disk(Complex64::new(d.center[0], d.center[1]), d.radius))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn build(&self) -> Result<Domain, DomainError> {
        Domain::new(self.curves()?)
    }
}

/// The two-disk example domain: disks of radius 1/4 centered at 0 and 1.
pub fn example_union() -> Domain {
    Domain::union_of_disks(&[
        (Complex64::new(0.0, 0.0), 0.25),
        (Complex64::new(1.0, 0.0), 0.25),
    ])
    .expect("example geometry is valid")
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_disk_build() {
        let d = Domain::disk(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(d.component_count(), 1);
        assert!((d.components()[0].length() - TAU).abs() < 1e-15);
    }

    #[test]
    fn example_union_components() {
        let d = example_union();
        assert_eq!(d.component_count(), 2);
        for comp in d.components() {
            assert!((comp.length() - TAU / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn overlapping_and_nested_rejected() {
        let r = Domain::union_of_disks(&[(c(0.0, 0.0), 1.0), (c(1.5, 0.0), 1.0)]);
        assert!(matches!(r, Err(DomainError::Overlapping { .. })));
        let r = Domain::union_of_disks(&[(c(0.0, 0.0), 1.0), (c(0.1, 0.0), 0.2)]);
        assert!(matches!(r, Err(DomainError::Overlapping { .. })));
    }

    #[test]
    fn spec_json_forms() {
        let d: DomainSpec =
            serde_json::from_str(r#"{"type":"disk","center":[0,0],"radius":1}"#).unwrap();
        assert_eq!(d.build().unwrap().component_count(), 1);
        let u: DomainSpec = serde_json::from_str(
            r#"{"type":"union","disks":[{"type":"disk","center":[0,0],"radius":0.25},{"type":"disk","center":[1,0],"radius":0.25}]}"#,
        )
        .unwrap();
        assert_eq!(u.build().unwrap().component_count(), 2);
        let e: DomainSpec =
            serde_json::from_str(r#"{"type":"ellipse","center":[0,0],"a":2,"b":1,"rot":0}"#)
                .unwrap();
        assert!(e.build().unwrap().is_convex());
        let bad: DomainSpec =
            serde_json::from_str(r#"{"type":"disk","center":[0,0],"radius":0}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn quadrature_weights_and_cauchy() {
        let d = Domain::disk(c(0.0, 0.0), 1.0).unwrap();
        let q = d.quadrature(64).unwrap();
        let total: f64 = q.nodes().iter().map(|n| n.weight).sum();
        assert!((total - TAU).abs() < 1e-12);
        let closed = q.contour_integral(|n| n.point);
        assert!(closed.norm() < 1e-10);
        let winding = q.contour_integral(|n| 1.0 / n.point) / Complex64::new(0.0, TAU);
        assert!((winding - 1.0).norm() < 1e-12);
        assert!(d.quadrature(8).is_err());
    }

    #[test]
    fn normals_are_tangent_over_i() {
        let d = Domain::ellipse(c(0.3, -0.2), 2.0, 1.0, 0.4).unwrap();
        let q = d.quadrature(64).unwrap();
        for n in q.nodes() {
            assert!((n.normal().norm() - 1.0).abs() < 1e-14);
            assert!((n.normal() * Complex64::new(0.0, 1.0) - n.tangent).norm() < 1e-15);
        }
    }

    #[test]
    fn containment_examples() {
        let d = Domain::disk(c(0.0, 0.0), 1.0).unwrap();
        let r = d.contains_point(c(0.0, 0.0)).unwrap();
        assert!(r.inside);
        assert!((r.margin - 1.0).abs() < 1e-15);

        let u = example_union();
        assert!(!u.contains_point(c(0.5, 0.0)).unwrap().inside);
        assert_eq!(u.contains_point(c(1.1, 0.0)).unwrap().component, Some(1));

        assert!(matches!(
            d.contains_point(c(1.0, 0.0)),
            Err(DomainError::OnBoundary { .. })
        ));
    }

    #[test]
    fn admissibility_modes() {
        let u = example_union();
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = u.admissibility(&m, AdmissibilityMode::Spectrum).unwrap();
        assert!(r.passed);
        assert!((r.min_margin - 0.25).abs() < 1e-12);
        assert!(matches!(
            u.admissibility(&m, AdmissibilityMode::NumericalRange),
            Err(DomainError::NotConvex)
        ));

        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let d = Domain::disk(c(0.25, 0.0), 1.0).unwrap();
        assert!(
            d.admissibility(&nil, AdmissibilityMode::NumericalRange)
                .unwrap()
                .passed
        );
        assert!(matches!(
            d.admissibility(&nil, AdmissibilityMode::NormCircle),
            Err(DomainError::NotOriginDisk)
        ));

        let half = Domain::disk(c(0.0, 0.0), 0.5).unwrap();
        let r = half
            .admissibility(&nil, AdmissibilityMode::NormCircle)
            .unwrap();
        assert!(!r.passed);
    }
}
