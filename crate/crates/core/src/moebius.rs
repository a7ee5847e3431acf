//! Disc automorphisms and general Möbius maps in unit-determinant
//! coefficient form, their classification, iterates and the hyperbolic
//! metric of the disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unit_root;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative tolerance for recognising the `[[α, β], [conj β, conj α]]`
/// structure of a disc automorphism.
const AUTOMORPHISM_TOL: f64 = 1e-9;

/// Renormalising by the computed determinant is only done while `ad - bc`
/// is not dominated by cancellation.
const RENORMALIZE_MAX_CONDITION: f64 = 1e6;

/// `z ↦ (a z + b) / (c z + d)` with `a d - b c = 1`.
///
/// Disc automorphisms are kept in the `±SU(1,1)` form `a = conj(d)`,
/// `b = conj(c)`, which composition preserves exactly in exact arithmetic and
/// which is re-imposed after every product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusTransform {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    automorphism: bool,
}

impl MoebiusTransform {
    /// Builds the map from arbitrary coefficients, scaling them to unit
    /// determinant.
    pub fn from_coefficients(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() == 0.0 {
            return Err(Error::domain("degenerate Möbius coefficients (zero determinant)"));
        }
        let s = det.sqrt();
        Ok(Self::assemble(a / s, b / s, c / s, d / s))
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE, automorphism: true }
    }

    /// Rotation `z ↦ e^{iθ} z`.
    pub fn rotation(theta: f64) -> Self {
        let h = Complex64::from_polar(1.0, theta / 2.0);
        Self { a: h, b: ZERO, c: ZERO, d: h.conj(), automorphism: true }
    }

    /// `z ↦ e^{iθ} (z - p) / (1 - conj(p) z)`.
    pub fn disc_automorphism(theta: f64, p: Complex64) -> Result<Self> {
        let gap = 1.0 - p.norm_sqr();
        if !(gap > 0.0) || !p.is_finite() {
            return Err(Error::domain("not a disc automorphism: |p| must be < 1"));
        }
        let s = gap.sqrt();
        let h = Complex64::from_polar(1.0 / s, theta / 2.0);
        let a = h;
        let b = -h * p;
        Ok(Self { a, b, c: b.conj(), d: a.conj(), automorphism: true })
    }

    /// `z ↦ ((1+μ) z + (1-μ)) / ((1-μ) z + (1+μ))`: hyperbolic with attracting
    /// point 1, repelling point -1 and multiplier μ at the attracting point.
    pub fn canonical_hyperbolic(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::domain(format!("canonical hyperbolic map needs 0 < μ < 1, got {mu}")));
        }
        let s = 2.0 * mu.sqrt();
        let p = Complex64::new((1.0 + mu) / s, 0.0);
        let q = Complex64::new((1.0 - mu) / s, 0.0);
        Ok(Self { a: p, b: q, c: q, d: p, automorphism: true })
    }

    /// Parabolic automorphism fixing 1: the translation `w ↦ w + i·shift` of
    /// the right half-plane conjugated by `w = (1 + z) / (1 - z)`.
    ///
    /// `shift = -1` gives `((2i - 1) z + 1) / (-z + 1 + 2i)`.
    pub fn parabolic_cayley(shift: f64) -> Result<Self> {
        if !shift.is_finite() || shift == 0.0 {
            return Err(Error::domain("parabolic translation length must be finite and nonzero"));
        }
        let h = Complex64::new(0.0, shift / 2.0);
        Ok(Self { a: ONE - h, b: h, c: -h, d: ONE + h, automorphism: true })
    }

    fn assemble(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        let structured = (a - d.conj()).norm() <= AUTOMORPHISM_TOL * scale
            && (b - c.conj()).norm() <= AUTOMORPHISM_TOL * scale
            && d.norm() > c.norm();
        let mut m = Self { a, b, c, d, automorphism: structured };
        if structured {
            m.symmetrize();
        }
        m
    }

    fn symmetrize(&mut self) {
        let alpha = (self.a + self.d.conj()) * 0.5;
        let beta = (self.b + self.c.conj()) * 0.5;
        self.a = alpha;
        self.b = beta;
        self.c = beta.conj();
        self.d = alpha.conj();
    }

    fn renormalize(&mut self) {
        let det = self.coefficient_determinant();
        let size = (self.a * self.d).norm() + (self.b * self.c).norm();
        if det.norm() > 0.0 && size <= RENORMALIZE_MAX_CONDITION * det.norm() {
            let s = det.sqrt();
            self.a /= s;
            self.b /= s;
            self.c /= s;
            self.d /= s;
        }
    }

    /// `[a, b, c, d]`.
    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Unit by construction. For automorphisms this returns the structural
    /// value 1: every constructor normalizes and composition multiplies
    /// determinants, while the floating-point `a d - b c` of a long iterate
    /// loses `ε (|a d| + |b c|)` to cancellation.
    pub fn determinant(&self) -> Complex64 {
        if self.automorphism {
            ONE
        } else {
            self.coefficient_determinant()
        }
    }

    /// `a d - b c` evaluated from the stored coefficients.
    pub fn coefficient_determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// True when the map is a bijection of the unit disc onto itself.
    pub fn is_disc_automorphism(&self) -> bool {
        self.automorphism
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.determinant() / (den * den)
    }

    /// `1 - |φ(z)|²` given `gap = 1 - |z|²`.
    ///
    /// For automorphisms this uses `1 - |φ(z)|² = (1 - |z|²) |φ'(z)|`, which
    /// stays accurate for points (and images) very close to the circle.
    pub fn image_gap(&self, z: Complex64, gap: f64) -> f64 {
        if self.automorphism {
            let den = self.c * z + self.d;
            gap * self.determinant().norm() / den.norm_sqr()
        } else {
            1.0 - self.eval(z).norm_sqr()
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MoebiusTransform) -> MoebiusTransform {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (p, q, r, s) = (inner.a, inner.b, inner.c, inner.d);
        let mut m = MoebiusTransform {
            a: a * p + b * r,
            b: a * q + b * s,
            c: c * p + d * r,
            d: c * q + d * s,
            automorphism: self.automorphism && inner.automorphism,
        };
        if m.automorphism {
            m.symmetrize();
        }
        m.renormalize();
        m
    }

    pub fn inverse(&self) -> MoebiusTransform {
        MoebiusTransform { a: self.d, b: -self.b, c: -self.c, d: self.a, automorphism: self.automorphism }
    }

    /// `n`-th iterate by square-and-multiply on the coefficient matrix.
    pub fn iterate(&self, n: u64) -> MoebiusTransform {
        let mut result = MoebiusTransform::identity();
        if !self.automorphism {
            result.automorphism = false;
        }
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base);
            }
        }
        if n == 0 {
            return MoebiusTransform::identity();
        }
        result
    }

    /// Max deviation `|φ(z) - z|` over a fixed sample of the closed disc.
    pub fn distance_from_identity(&self) -> f64 {
        sample_points()
            .iter()
            .map(|&z| (self.eval(z) - z).norm())
            .fold(0.0, f64::max)
    }

    /// Hyperbolic distance `ρ(φ(0), 0)`, computed without forming `1 - |φ(0)|`
    /// by subtraction.
    pub fn origin_displacement(&self) -> f64 {
        if !self.automorphism {
            return hyperbolic_distance(self.eval(ZERO), ZERO).unwrap_or(f64::INFINITY);
        }
        let w = (self.b / self.d).norm();
        // 1 - |w|² = det / |d|²; the direct form is exact enough away from
        // the circle and agrees with eval there
        let log_gap = if w * w < 0.5 { (-(w * w)).ln_1p() } else { -2.0 * self.d.norm().ln() };
        displacement_from_parts(w, log_gap)
    }
}

/// `ρ(w, 0)` from `|w|` and `ln(1 - |w|²)`.
fn displacement_from_parts(modulus: f64, log_gap: f64) -> f64 {
    (1.0 + modulus).ln() - 0.5 * log_gap
}

fn sample_points() -> [Complex64; 16] {
    let mut pts = [ZERO; 16];
    for (k, p) in pts.iter_mut().enumerate() {
        let r = if k % 2 == 0 { 0.5 } else { 0.9 };
        *p = unit_root(k, 16) * r;
    }
    pts
}

/// Dynamical type of a disc automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutomorphismKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub location: Complex64,
    pub derivative: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Diagnostic {
    /// The fixed-point discriminant sits inside the parabolic tolerance
    /// without vanishing; the verdict may flip under perturbation.
    ClassificationUnstable { discriminant: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutomorphismClass {
    pub kind: AutomorphismKind,
    pub fixed_points: Vec<FixedPoint>,
    /// Denjoy–Wolff point of a hyperbolic map.
    pub attractive: Option<Complex64>,
    pub repulsive: Option<Complex64>,
    /// `φ'(attractive) ∈ (0, 1)` for hyperbolic maps.
    pub multiplier: Option<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

impl AutomorphismClass {
    /// The point whose boundary value of the weight governs the spectrum:
    /// the interior fixed point (elliptic), the boundary fixed point
    /// (parabolic) or the attracting point (hyperbolic).
    pub fn primary_point(&self) -> Option<Complex64> {
        match self.kind {
            AutomorphismKind::Identity => None,
            AutomorphismKind::Hyperbolic => self.attractive,
            _ => self.fixed_points.first().map(|f| f.location),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// `|trace² - 4|` below this is parabolic.
    pub parabolic_tol: f64,
    /// Fixed points within this distance of the circle are snapped onto it.
    pub boundary_snap: f64,
    /// `max |φ(z) - z|` below this is the identity.
    pub identity_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { parabolic_tol: 1e-10, boundary_snap: 1e-9, identity_tol: 1e-12 }
    }
}

pub fn classify(phi: &MoebiusTransform) -> Result<AutomorphismClass> {
    classify_with(phi, &ClassifyOptions::default())
}

pub fn classify_with(phi: &MoebiusTransform, opts: &ClassifyOptions) -> Result<AutomorphismClass> {
    if !phi.is_disc_automorphism() {
        return Err(Error::domain("not a disc automorphism"));
    }
    let mut class = AutomorphismClass {
        kind: AutomorphismKind::Identity,
        fixed_points: Vec::new(),
        attractive: None,
        repulsive: None,
        multiplier: None,
        diagnostics: Vec::new(),
    };
    if phi.distance_from_identity() <= opts.identity_tol {
        return Ok(class);
    }
    let [a, b, c, d] = phi.coefficients();
    let trace = a + d;
    let disc = trace * trace - 4.0 * phi.determinant();
    let snap = |z: Complex64| {
        let r = z.norm();
        if (r - 1.0).abs() <= opts.boundary_snap {
            z / r
        } else {
            z
        }
    };
    let fixed = |z: Complex64| FixedPoint { location: z, derivative: phi.derivative(z) };

    if disc.norm() < opts.parabolic_tol {
        if disc.norm() > 64.0 * f64::EPSILON {
            class.diagnostics.push(Diagnostic::ClassificationUnstable { discriminant: disc.norm() });
        }
        // double root of c z² + (d - a) z - b
        let z = snap((a - d) / (2.0 * c));
        class.kind = AutomorphismKind::Parabolic;
        class.fixed_points.push(fixed(z));
        return Ok(class);
    }

    let (r1, r2) = fixed_point_roots(a, b, c, d);
    if disc.re < 0.0 {
        class.kind = AutomorphismKind::Elliptic;
        let inner = match (r1, r2) {
            (Some(p), Some(q)) => {
                if p.norm() < q.norm() {
                    p
                } else {
                    q
                }
            }
            (Some(p), None) | (None, Some(p)) => p,
            (None, None) => return Err(Error::Internal("elliptic map without fixed point".into())),
        };
        class.fixed_points.push(fixed(inner));
        return Ok(class);
    }

    let (p, q) = match (r1, r2) {
        (Some(p), Some(q)) => (snap(p), snap(q)),
        _ => return Err(Error::Internal("hyperbolic map with a fixed point at infinity".into())),
    };
    let (fp, fq) = (fixed(p), fixed(q));
    let (att, rep) = if fp.derivative.norm() < fq.derivative.norm() { (fp, fq) } else { (fq, fp) };
    class.kind = AutomorphismKind::Hyperbolic;
    class.attractive = Some(att.location);
    class.repulsive = Some(rep.location);
    class.multiplier = Some(att.derivative.re);
    class.fixed_points = vec![att, rep];
    Ok(class)
}

/// Roots of `c z² + (d - a) z - b = 0`, larger-magnitude root first so that
/// the second root is recovered without cancellation. `None` marks a root at
/// infinity.
fn fixed_point_roots(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> (Option<Complex64>, Option<Complex64>) {
    let qa = c;
    let qb = d - a;
    let qc = -b;
    let scale = a.norm().max(d.norm());
    if qa.norm() <= 1e-15 * scale {
        if qb.norm() == 0.0 {
            return (None, None);
        }
        return (Some(-qc / qb), None);
    }
    let s = (qb * qb - 4.0 * qa * qc).sqrt();
    let s = if (qb.conj() * s).re >= 0.0 { s } else { -s };
    let q = -0.5 * (qb + s);
    if q.norm() == 0.0 {
        return (Some(ZERO), Some(ZERO));
    }
    (Some(q / qa), Some(qc / q))
}

/// Smallest `m ≤ max_period` with `φ_m = id` for an elliptic automorphism:
/// the rotation multiplier at the interior fixed point must satisfy
/// `|φ'(p)^m - 1| < 1e-10`, confirmed by comparing `φ_m` with the identity.
pub fn elliptic_period(phi: &MoebiusTransform, class: &AutomorphismClass, max_period: u32) -> Option<u32> {
    if class.kind != AutomorphismKind::Elliptic {
        return None;
    }
    let lambda = class.fixed_points[0].derivative;
    let mut power = ONE;
    for m in 1..=max_period {
        power *= lambda;
        if (power - ONE).norm() < 1e-10 && phi.iterate(m as u64).distance_from_identity() < 1e-8 {
            return Some(m);
        }
    }
    None
}

/// Hyperbolic (pseudo-hyperbolic based) distance
/// `½ log((1 + δ) / (1 - δ))`, `δ = |z - w| / |1 - conj(z) w|`.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0) || !(w.norm() < 1.0) {
        return Err(Error::domain("hyperbolic distance needs points with modulus < 1"));
    }
    let delta = (z - w).norm() / (ONE - z.conj() * w).norm();
    Ok(delta.min(1.0).atanh())
}

/// One step of the orbit of the origin under `φ`: `|φ_n(0)|` and
/// `ln(1 - |φ_n(0)|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub n: u64,
    pub modulus: f64,
    pub log_gap: f64,
}

impl OrbitPoint {
    /// `ln(1 - |φ_n(0)|)`.
    pub fn log_distance_to_circle(&self) -> f64 {
        self.log_gap - (1.0 + self.modulus).ln()
    }

    /// `ρ(φ_n(0), 0)`.
    pub fn displacement(&self) -> f64 {
        displacement_from_parts(self.modulus, self.log_gap)
    }
}

/// Orbit `φ_1(0), …, φ_len(0)` of an automorphism, with the coefficient
/// matrix rescaled every step and its scale tracked in log form, so that
/// iterates far beyond the overflow range stay representable.
pub fn origin_orbit(phi: &MoebiusTransform, len: u64) -> Result<Vec<OrbitPoint>> {
    if !phi.is_disc_automorphism() {
        return Err(Error::domain("not a disc automorphism"));
    }
    let [pa, pb, pc, pd] = phi.coefficients();
    let det_log = phi.determinant().norm().ln();
    let (mut a, mut b, mut c, mut d) = (ONE, ZERO, ZERO, ONE);
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(len as usize);
    for n in 1..=len {
        let na = pa * a + pb * c;
        let nb = pa * b + pb * d;
        let nc = pc * a + pd * c;
        let nd = pc * b + pd * d;
        let s = na.norm().max(nb.norm()).max(nc.norm()).max(nd.norm());
        a = na / s;
        b = nb / s;
        c = nc / s;
        d = nd / s;
        log_scale += s.ln();
        // det(φ_n) = det(φ)^n = e^{2 log_scale} det(scaled)
        let log_gap = n as f64 * det_log - 2.0 * (log_scale + d.norm().ln());
        out.push(OrbitPoint { n, modulus: (b / d).norm(), log_gap });
    }
    Ok(out)
}

/// `(1 - |φ_n(0)|)^{1/n}` for `n = 1..=len`; tends to `φ'(a)` at the
/// Denjoy–Wolff point of a parabolic or hyperbolic automorphism.
pub fn dw_limit_sequence(phi: &MoebiusTransform, len: u64) -> Result<Vec<f64>> {
    let class = classify(phi)?;
    match class.kind {
        AutomorphismKind::Parabolic | AutomorphismKind::Hyperbolic => {}
        _ => {
            return Err(Error::domain(
                "the Denjoy-Wolff limit requires a boundary Denjoy-Wolff point (parabolic or hyperbolic map)",
            ))
        }
    }
    Ok(origin_orbit(phi, len)?
        .iter()
        .map(|p| (p.log_distance_to_circle() / p.n as f64).exp())
        .collect())
}
