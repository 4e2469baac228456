//! Oriented Euclidean spheres as norm-one vectors of the fundamental form
//! `2 t_0 t_{n+1} + t_1^2 + ... + t_n^2`.
//!
//! For `v = (a_0, a_1, ..., a_{n+1})` with `(v, v) = 1` and `a_0 != 0` the
//! sphere has oriented curvature `a_0`, center `(a_1/a_0, ..., a_n/a_0)` and
//! radius `1/|a_0|`. When `a_0 = 0` it is the hyperplane
//! `a_1 x_1 + ... + a_n x_n + a_{n+1} = 0`. The interior (ball) is the set
//! where `a_0 |x|^2 - 2 Σ a_i x_i - 2 a_{n+1} < 0`: the bounded ball for
//! positive curvature, the exterior for negative curvature and the side
//! `Σ a_i x_i + a_{n+1} > 0` for a hyperplane.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{is_integral, rat, rational_sqrt, to_f64, ExactVector, Rational};
use crate::lorentz::QuadraticSpace;

/// A normalized sphere vector in the fundamental space of dimension `n + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphereVector(ExactVector);

impl SphereVector {
    pub fn new(v: ExactVector) -> Result<Self> {
        if v.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "sphere vectors need at least 3 coordinates, got {}",
                v.len()
            )));
        }
        let space = QuadraticSpace::fundamental(v.len() - 2);
        let norm = space.norm(&v)?;
        if !norm.is_one() {
            return Err(Error::WrongNorm { expected: Box::new(Rational::one()), found: Box::new(norm) });
        }
        Ok(SphereVector(v))
    }

    /// Ambient Euclidean dimension `n`.
    pub fn dimension(&self) -> usize {
        self.0.len() - 2
    }

    /// Oriented curvature `a_0`.
    pub fn curvature(&self) -> &Rational {
        &self.0[0]
    }

    pub fn vector(&self) -> &ExactVector {
        &self.0
    }

    pub fn into_vector(self) -> ExactVector {
        self.0
    }

    pub fn negate(&self) -> Self {
        SphereVector(-&self.0)
    }

    pub fn inner(&self, other: &SphereVector) -> Result<Rational> {
        QuadraticSpace::fundamental(self.dimension()).inner(&self.0, &other.0)
    }
}

/// Oriented sphere or hyperplane in `R^n`.
#[derive(Clone, Debug)]
pub enum EuclideanSphere {
    /// `curvature` is the oriented curvature, never zero.
    Sphere { curvature: Rational, center: Vec<Rational> },
    /// The hyperplane `normal · x + offset = 0` with interior `normal · x + offset > 0`.
    /// Stored as given; `normal` need not be a unit vector.
    Hyperplane { normal: Vec<Rational>, offset: Rational },
}

impl EuclideanSphere {
    pub fn sphere(curvature: Rational, center: Vec<Rational>) -> Result<Self> {
        if curvature.is_zero() {
            return Err(Error::InvalidArgument("a sphere needs nonzero curvature".into()));
        }
        Ok(EuclideanSphere::Sphere { curvature, center })
    }

    pub fn hyperplane(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument("hyperplane normal must be nonzero".into()));
        }
        Ok(EuclideanSphere::Hyperplane { normal, offset })
    }

    pub fn dimension(&self) -> usize {
        match self {
            EuclideanSphere::Sphere { center, .. } => center.len(),
            EuclideanSphere::Hyperplane { normal, .. } => normal.len(),
        }
    }

    pub fn curvature(&self) -> Rational {
        match self {
            EuclideanSphere::Sphere { curvature, .. } => curvature.clone(),
            EuclideanSphere::Hyperplane { .. } => Rational::zero(),
        }
    }

    /// `None` for hyperplanes (infinite radius).
    pub fn radius(&self) -> Option<Rational> {
        match self {
            EuclideanSphere::Sphere { curvature, .. } => Some(curvature.abs().recip()),
            EuclideanSphere::Hyperplane { .. } => None,
        }
    }

    pub fn center(&self) -> Option<&[Rational]> {
        match self {
            EuclideanSphere::Sphere { center, .. } => Some(center),
            EuclideanSphere::Hyperplane { .. } => None,
        }
    }

    pub fn is_hyperplane(&self) -> bool {
        matches!(self, EuclideanSphere::Hyperplane { .. })
    }

    /// `+1` when the interior is the bounded ball (or the positive side of a
    /// hyperplane as stored), `-1` for the reversed orientation of a sphere.
    pub fn orientation(&self) -> i8 {
        match self {
            EuclideanSphere::Sphere { curvature, .. } if curvature.is_negative() => -1,
            _ => 1,
        }
    }

    /// Same set with the opposite interior.
    pub fn reversed(&self) -> Self {
        match self {
            EuclideanSphere::Sphere { curvature, center } => {
                EuclideanSphere::Sphere { curvature: -curvature, center: center.clone() }
            }
            EuclideanSphere::Hyperplane { normal, offset } => EuclideanSphere::Hyperplane {
                normal: normal.iter().map(|x| -x).collect(),
                offset: -offset,
            },
        }
    }
}

impl PartialEq for EuclideanSphere {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                EuclideanSphere::Sphere { curvature: k1, center: c1 },
                EuclideanSphere::Sphere { curvature: k2, center: c2 },
            ) => k1 == k2 && c1 == c2,
            (
                EuclideanSphere::Hyperplane { normal: n1, offset: o1 },
                EuclideanSphere::Hyperplane { normal: n2, offset: o2 },
            ) => {
                // equal up to a positive scalar
                if n1.len() != n2.len() {
                    return false;
                }
                let a: Vec<&Rational> = n1.iter().chain(std::iter::once(o1)).collect();
                let b: Vec<&Rational> = n2.iter().chain(std::iter::once(o2)).collect();
                let Some(p) = a.iter().position(|x| !x.is_zero()) else { return false };
                if b[p].is_zero() {
                    return false;
                }
                let s = b[p] / a[p];
                s.is_positive() && a.iter().zip(&b).all(|(x, y)| &(*x * &s) == *y)
            }
            _ => false,
        }
    }
}

impl Eq for EuclideanSphere {}

pub fn sphere_from_vector(v: &SphereVector) -> EuclideanSphere {
    let a = v.vector();
    let n = v.dimension();
    let a0 = &a[0];
    if a0.is_zero() {
        EuclideanSphere::Hyperplane {
            normal: (1..=n).map(|i| a[i].clone()).collect(),
            offset: a[n + 1].clone(),
        }
    } else {
        EuclideanSphere::Sphere {
            curvature: a0.clone(),
            center: (1..=n).map(|i| &a[i] / a0).collect(),
        }
    }
}

/// Inverse of [`sphere_from_vector`]. A hyperplane normal is rescaled to
/// unit length, which must be possible over the rationals.
pub fn vector_from_sphere(s: &EuclideanSphere) -> Result<SphereVector> {
    let coords = match s {
        EuclideanSphere::Sphere { curvature, center } => {
            let a: Vec<Rational> = center.iter().map(|c| c * curvature).collect();
            let sq: Rational = a.iter().map(|x| x * x).sum();
            let last = (Rational::one() - sq) / (rat(2) * curvature);
            std::iter::once(curvature.clone()).chain(a).chain(std::iter::once(last)).collect()
        }
        EuclideanSphere::Hyperplane { normal, offset } => {
            let sq: Rational = normal.iter().map(|x| x * x).sum();
            let len = rational_sqrt(&sq).ok_or_else(|| {
                Error::InvalidArgument("hyperplane normal has irrational length".into())
            })?;
            std::iter::once(Rational::zero())
                .chain(normal.iter().map(|x| x / &len))
                .chain(std::iter::once(offset / &len))
                .collect()
        }
    };
    SphereVector::new(ExactVector::new(coords))
}

/// Relative position of two oriented spheres.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRelation {
    Identical,
    /// `(v,w) = -1`
    Tangent,
    /// `(v,w) < -1`
    DisjointInteriors,
    /// `0 < |(v,w)| < 1`
    Intersecting,
    /// `(v,w) = 0`
    Orthogonal,
    /// `(v,w) >= 1` with `v != w`: one ball contains the other.
    Nested,
}

pub fn classify_pair(v: &SphereVector, w: &SphereVector) -> Result<(PairRelation, Rational)> {
    if v.dimension() != w.dimension() {
        return Err(Error::DimensionMismatch { expected: v.vector().len(), found: w.vector().len() });
    }
    let p = v.inner(w)?;
    let minus_one = rat(-1);
    let relation = if v == w {
        PairRelation::Identical
    } else if p == minus_one {
        PairRelation::Tangent
    } else if p < minus_one {
        PairRelation::DisjointInteriors
    } else if p.is_zero() {
        PairRelation::Orthogonal
    } else if p < Rational::one() {
        PairRelation::Intersecting
    } else {
        PairRelation::Nested
    };
    Ok((relation, p))
}

/// Rectangle in the plane, `x ∈ [min_x, max_x]`, `y ∈ [min_y, max_y]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Viewport {
    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.min_x..=self.max_x).contains(&x) && (self.min_y..=self.max_y).contains(&y)
    }

    fn around(cx: f64, cy: f64, r: f64) -> Self {
        Viewport { min_x: cx - r, min_y: cy - r, max_x: cx + r, max_y: cy + r }
    }

    fn union(self, other: Viewport) -> Self {
        Viewport {
            min_x: self.min_x.min(other.min_x),
            min_y: self.min_y.min(other.min_y),
            max_x: self.max_x.max(other.max_x),
            max_y: self.max_y.max(other.max_y),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SvgOptions {
    pub labels: bool,
    /// Output size in pixels of the longer side.
    pub pixels: Option<u32>,
}

/// Bounding box used when no viewport is given: the sphere of most negative
/// curvature if there is one, otherwise all bounded spheres.
pub fn auto_viewport(spheres: &[EuclideanSphere]) -> Viewport {
    let bounding = spheres
        .iter()
        .filter(|s| s.curvature().is_negative())
        .min_by(|a, b| a.curvature().cmp(&b.curvature()));
    let boxes = |s: &EuclideanSphere| -> Option<Viewport> {
        let c = s.center()?;
        let r = to_f64(&s.radius()?);
        Some(Viewport::around(to_f64(&c[0]), to_f64(&c[1]), r))
    };
    if let Some(b) = bounding.and_then(boxes) {
        return b;
    }
    spheres
        .iter()
        .filter_map(boxes)
        .reduce(Viewport::union)
        .unwrap_or(Viewport { min_x: -1.0, min_y: -1.0, max_x: 1.0, max_y: 1.0 })
}

/// Segment of the line `n·x + d = 0` inside `vp`, if any.
fn clip_line(normal: (f64, f64), offset: f64, vp: &Viewport) -> Option<((f64, f64), (f64, f64))> {
    let (a, b) = normal;
    let mut hits: Vec<(f64, f64)> = Vec::with_capacity(4);
    if b != 0.0 {
        for x in [vp.min_x, vp.max_x] {
            let y = -(a * x + offset) / b;
            if (vp.min_y..=vp.max_y).contains(&y) {
                hits.push((x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [vp.min_y, vp.max_y] {
            let x = -(b * y + offset) / a;
            if (vp.min_x..=vp.max_x).contains(&x) {
                hits.push((x, y));
            }
        }
    }
    hits.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
    match hits.as_slice() {
        [p, .., q] => Some((*p, *q)),
        _ => None,
    }
}

/// SVG 1.1 drawing of a planar circle packing. The y axis points up: every
/// y coordinate is negated on output.
pub fn render_svg(
    spheres: &[EuclideanSphere],
    viewport: Option<Viewport>,
    options: SvgOptions,
) -> Result<String> {
    if let Some(s) = spheres.iter().find(|s| s.dimension() != 2) {
        return Err(Error::Unsupported(format!(
            "SVG rendering needs circles in the plane, got dimension {}",
            s.dimension()
        )));
    }
    let vp = viewport.unwrap_or_else(|| auto_viewport(spheres));
    let pad = 0.02 * vp.width().max(vp.height());
    let view = Viewport {
        min_x: vp.min_x - pad,
        min_y: vp.min_y - pad,
        max_x: vp.max_x + pad,
        max_y: vp.max_y + pad,
    };
    let span = view.width().max(view.height());
    let stroke = span / 1000.0;
    let pixels = f64::from(options.pixels.unwrap_or(800));
    let (w_px, h_px) = (pixels * view.width() / span, pixels * view.height() / span);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w_px:.0}" height="{h_px:.0}" viewBox="{} {} {} {}">"#,
        view.min_x,
        -view.max_y,
        view.width(),
        view.height()
    );
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="{stroke}">"#);
    let mut labels = String::new();
    for s in spheres {
        match s {
            EuclideanSphere::Sphere { curvature, center } => {
                let (cx, cy) = (to_f64(&center[0]), to_f64(&center[1]));
                let r = 1.0 / to_f64(curvature).abs();
                let _ = writeln!(out, r#"<circle cx="{cx}" cy="{}" r="{r}"/>"#, -cy);
                if options.labels && is_integral(curvature) && curvature.is_positive() {
                    let size = r * 0.8;
                    if size > span / 2000.0 {
                        let _ = writeln!(
                            labels,
                            r#"<text x="{cx}" y="{}" font-size="{size}" text-anchor="middle" dominant-baseline="central">{curvature}</text>"#,
                            -cy
                        );
                    }
                }
            }
            EuclideanSphere::Hyperplane { normal, offset } => {
                let n = (to_f64(&normal[0]), to_f64(&normal[1]));
                if let Some(((x1, y1), (x2, y2))) = clip_line(n, to_f64(offset), &view) {
                    let _ = writeln!(out, r#"<line x1="{x1}" y1="{}" x2="{x2}" y2="{}"/>"#, -y1, -y2);
                }
            }
        }
    }
    let _ = writeln!(out, "</g>");
    if !labels.is_empty() {
        let _ = writeln!(out, r#"<g fill="black" stroke="none" font-family="sans-serif">"#);
        out.push_str(&labels);
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
