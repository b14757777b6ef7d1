//! The finite datum classifying a twisted toric 4-manifold, its validation,
//! import from Delzant polygons, and witness-checking of equivalences.
//!
//! Conventions: characteristic vectors are oriented generators listed in
//! boundary order and written in the frame at the start of their arc, which is
//! the basepoint frame transported along the boundary. Consecutive arcs meet
//! at a smooth corner when `det(u_j, u_{j+1}) = ±1`, and the orientation
//! convention asks for `+1`. Across the wrap corner the last vector is carried
//! into the first arc's frame by the boundary holonomy `M_∂`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{det, det2, unimodular_inverse, IntMat, IntVec};
use crate::surface::BaseSurface;

/// Holonomy representation of the flat `SL₂(ℤ)` bundle.
///
/// For a one-boundary surface the images of the standard generators
/// `α_i, β_i` are stored; the boundary holonomy is derived from the relation
/// `∏[α_i, β_i]·γ = 1` and never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonodromyRep {
    Surface { alphas: Vec<IntMat>, betas: Vec<IntMat> },
    Loop(IntMat),
}

impl MonodromyRep {
    pub fn trivial(genus: usize) -> Self {
        MonodromyRep::Surface {
            alphas: vec![IntMat::identity(2); genus],
            betas: vec![IntMat::identity(2); genus],
        }
    }

    /// Upper-triangular shears `α_i ↦ [[1,a_i],[0,1]]`, `β_i ↦ [[1,b_i],[0,1]]`.
    pub fn shears(a: &[i64], b: &[i64]) -> Self {
        MonodromyRep::Surface {
            alphas: a.iter().map(|&x| IntMat::mat2(1, x, 0, 1)).collect(),
            betas: b.iter().map(|&x| IntMat::mat2(1, x, 0, 1)).collect(),
        }
    }

    /// Every stored matrix with a location label.
    pub fn matrices(&self) -> Vec<(String, &IntMat)> {
        match self {
            MonodromyRep::Surface { alphas, betas } => alphas
                .iter()
                .enumerate()
                .map(|(i, m)| (format!("monodromy.alpha[{i}]"), m))
                .chain(betas.iter().enumerate().map(|(i, m)| (format!("monodromy.beta[{i}]"), m)))
                .collect(),
            MonodromyRep::Loop(m) => vec![("monodromy.loop".into(), m)],
        }
    }

    /// Holonomy around the boundary. For surfaces this is
    /// `(∏ᵢ ρ(α_i)ρ(β_i)ρ(α_i)⁻¹ρ(β_i)⁻¹)⁻¹`; for the cylinder it is the loop
    /// matrix of the first boundary circle.
    pub fn boundary_holonomy(&self) -> Result<IntMat> {
        match self {
            MonodromyRep::Surface { alphas, betas } => {
                let mut prod = IntMat::identity(2);
                for (a, b) in alphas.iter().zip(betas) {
                    prod = &prod * &commutator(a, b)?;
                }
                Ok(unimodular_inverse(&prod)?)
            }
            MonodromyRep::Loop(m) => Ok(m.clone()),
        }
    }
}

/// `a·b·a⁻¹·b⁻¹`
pub fn commutator(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    let ab = a * b;
    let a_inv = unimodular_inverse(a)?;
    let b_inv = unimodular_inverse(b)?;
    Ok(&(&ab * &a_inv) * &b_inv)
}

pub fn is_sl2(m: &IntMat) -> bool {
    m.rows() == 2 && m.cols() == 2 && det(m).map(|d| d.is_one()).unwrap_or(false)
}

/// One oriented primitive generator per boundary arc, in boundary order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicData {
    pub vectors: Vec<IntVec>,
}

impl CharacteristicData {
    pub fn new(vectors: Vec<IntVec>) -> Self {
        CharacteristicData { vectors }
    }

    pub fn from_i64s(vectors: &[[i64; 2]]) -> Self {
        CharacteristicData {
            vectors: vectors.iter().map(|v| IntVec::from_i64s(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedToricSpec {
    pub fiber_rank: usize,
    pub base: BaseSurface,
    pub monodromy: MonodromyRep,
    pub characteristic: CharacteristicData,
}

impl TwistedToricSpec {
    pub fn new(base: BaseSurface, monodromy: MonodromyRep, characteristic: CharacteristicData) -> Self {
        TwistedToricSpec {
            fiber_rank: 2,
            base,
            monodromy,
            characteristic,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_spec(self)
    }

    /// Returns an error carrying the report unless validation passes.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_spec(self);
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidSpec(report))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    Structure,
    Sl2,
    Primitive,
    Corner,
    Wrap,
    Lattice,
    Rational,
    Simple,
    NonSingular,
}

impl CheckId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Structure => "structure",
            CheckId::Sl2 => "sl2",
            CheckId::Primitive => "primitive",
            CheckId::Corner => "corner",
            CheckId::Wrap => "wrap",
            CheckId::Lattice => "lattice",
            CheckId::Rational => "rational",
            CheckId::Simple => "simple",
            CheckId::NonSingular => "non-singular",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Severity {
    Failure,
    /// Smooth but reversed corner orientation; tolerated by everything except
    /// the signature, which needs oriented generators.
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub check: CheckId,
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    fn from_findings(findings: Vec<Finding>) -> Self {
        ValidationReport {
            valid: !findings.iter().any(|f| f.severity == Severity::Failure),
            findings,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Failure)
    }

    pub fn has_failure(&self, check: CheckId) -> bool {
        self.failures().any(|f| f.check == check)
    }

    /// No failures and no orientation warnings.
    pub fn is_oriented(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.findings.is_empty() {
            return write!(f, "valid");
        }
        for (i, finding) in self.findings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let tag = match finding.severity {
                Severity::Failure => "FAIL",
                Severity::Warning => "WARN",
            };
            write!(f, "{tag} [{}] {}: {}", finding.check, finding.location, finding.message)?;
        }
        Ok(())
    }
}

struct Findings(Vec<Finding>);

impl Findings {
    fn fail(&mut self, check: CheckId, location: impl Into<String>, message: impl Into<String>) {
        self.0.push(Finding {
            check,
            severity: Severity::Failure,
            location: location.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, check: CheckId, location: impl Into<String>, message: impl Into<String>) {
        self.0.push(Finding {
            check,
            severity: Severity::Warning,
            location: location.into(),
            message: message.into(),
        });
    }

    /// Smoothness of a corner (`|det| = 1`) is a failure; the orientation
    /// sign only warns.
    fn corner(&mut self, check: CheckId, location: String, a: &IntVec, b: &IntVec, what: &str) {
        let d = det2(a, b);
        if d.is_one() {
            return;
        }
        if d.abs().is_one() {
            self.warn(
                check,
                location,
                format!("{what} = -1: smooth corner with reversed orientation"),
            );
        } else {
            self.fail(check, location, format!("{what} = {d}, expected +1"));
        }
    }
}

fn is_plus_minus(a: &IntVec, b: &IntVec) -> bool {
    a == b || *a == -b
}

/// Runs every structural, holonomy, and lattice check on the datum.
pub fn validate_spec(spec: &TwistedToricSpec) -> ValidationReport {
    let mut out = Findings(Vec::new());

    if spec.fiber_rank != 2 {
        out.fail(
            CheckId::Structure,
            "fiber_rank",
            format!("fiber rank {} is not supported, expected 2", spec.fiber_rank),
        );
    }
    match (&spec.base, &spec.monodromy) {
        (BaseSurface::OneBoundary { genus, .. }, MonodromyRep::Surface { alphas, betas }) => {
            if alphas.len() != *genus || betas.len() != *genus {
                out.fail(
                    CheckId::Structure,
                    "monodromy",
                    format!(
                        "genus {genus} needs {genus} alpha and beta matrices, found {} and {}",
                        alphas.len(),
                        betas.len()
                    ),
                );
            }
        }
        (BaseSurface::Cylinder, MonodromyRep::Loop(_)) => {}
        (base, _) => out.fail(
            CheckId::Structure,
            "monodromy",
            format!("monodromy shape does not match base ({base})"),
        ),
    }
    let mut matrices_ok = true;
    for (loc, m) in spec.monodromy.matrices() {
        if m.rows() != 2 || m.cols() != 2 {
            out.fail(CheckId::Structure, loc, format!("{}x{} matrix, expected 2x2", m.rows(), m.cols()));
            matrices_ok = false;
        } else if !is_sl2(m) {
            let d = det(m).expect("square");
            out.fail(CheckId::Sl2, loc, format!("determinant {d}, expected 1"));
            matrices_ok = false;
        }
    }
    let arcs = spec.base.arc_count();
    let vectors = &spec.characteristic.vectors;
    let mut vectors_ok = true;
    if vectors.len() != arcs {
        out.fail(
            CheckId::Structure,
            "characteristic",
            format!("{} vector(s) for {arcs} boundary arc(s)", vectors.len()),
        );
        vectors_ok = false;
    }
    for (j, u) in vectors.iter().enumerate() {
        let loc = format!("characteristic[{j}]");
        if u.dim() != 2 {
            out.fail(CheckId::Structure, loc, format!("vector of dimension {}, expected 2", u.dim()));
            vectors_ok = false;
        } else if !u.is_primitive() {
            out.fail(CheckId::Primitive, loc, format!("{u} is not primitive"));
        }
    }
    if !(matrices_ok && vectors_ok) || out.0.iter().any(|f| f.check == CheckId::Structure) {
        return ValidationReport::from_findings(out.0);
    }

    let wrap = spec.monodromy.boundary_holonomy().expect("checked SL2 matrices");
    match spec.base {
        BaseSurface::OneBoundary { corners, .. } if corners >= 1 => {
            for j in 0..corners - 1 {
                out.corner(
                    CheckId::Corner,
                    format!("corner between arcs {} and {}", j + 1, j + 2),
                    &vectors[j],
                    &vectors[j + 1],
                    &format!("det(u{}, u{})", j + 1, j + 2),
                );
            }
            let carried = wrap.mul_vec(&vectors[corners - 1]);
            out.corner(
                CheckId::Wrap,
                format!("wrap corner between arcs {corners} and 1"),
                &carried,
                &vectors[0],
                &format!("det(M·u{corners}, u1)"),
            );
        }
        BaseSurface::OneBoundary { .. } => {
            let u = &vectors[0];
            let image = wrap.mul_vec(u);
            if !is_plus_minus(&image, u) {
                out.fail(
                    CheckId::Lattice,
                    "boundary circle",
                    format!("boundary holonomy sends {u} to {image}, which spans a different lattice"),
                );
            }
        }
        BaseSurface::Cylinder => {
            let m_inv = unimodular_inverse(&wrap).expect("SL2");
            for (c, (u, m)) in [(&vectors[0], &wrap), (&vectors[1], &m_inv)].into_iter().enumerate() {
                let image = m.mul_vec(u);
                if !is_plus_minus(&image, u) {
                    out.fail(
                        CheckId::Lattice,
                        format!("boundary circle {}", c + 1),
                        format!("loop holonomy sends {u} to {image}, which spans a different lattice"),
                    );
                }
            }
        }
    }
    ValidationReport::from_findings(out.0)
}

/// Whether `g` is a bundle automorphism carrying the characteristic lattices
/// of `a` onto those of `b`.
///
/// `g` must lie in `SL₂(ℤ)` and commute with every holonomy of `a`; a
/// non-commuting `g` is reported as [`Error::NotCommuting`]. Equivalence also
/// requires `b` to carry the same holonomies as `a`.
pub fn equivalent_under(a: &TwistedToricSpec, b: &TwistedToricSpec, g: &IntMat) -> Result<bool> {
    if a.base != b.base {
        return Err(Error::Shape("specs have different bases".into()));
    }
    let same_shape = match (&a.monodromy, &b.monodromy) {
        (
            MonodromyRep::Surface { alphas: a1, betas: b1 },
            MonodromyRep::Surface { alphas: a2, betas: b2 },
        ) => a1.len() == a2.len() && b1.len() == b2.len(),
        (MonodromyRep::Loop(_), MonodromyRep::Loop(_)) => true,
        _ => false,
    };
    if !same_shape || a.characteristic.len() != b.characteristic.len() {
        return Err(Error::Shape("specs have different monodromy or characteristic shapes".into()));
    }
    if !is_sl2(g) {
        return Err(Error::NotSl2(g.to_string()));
    }
    for (loc, m) in a.monodromy.matrices() {
        if m.rows() != 2 || m.cols() != 2 || &(g * m) != &(m * g) {
            return Err(Error::NotCommuting(loc));
        }
    }
    if a.monodromy != b.monodromy {
        return Ok(false);
    }
    Ok(a
        .characteristic
        .vectors
        .iter()
        .zip(&b.characteristic.vectors)
        .all(|(u, v)| u.dim() == 2 && v.dim() == 2 && is_plus_minus(&g.mul_vec(u), v)))
}

/// A rational vector in ℚ².
pub type RatVec2 = [BigRational; 2];

pub fn ratvec(x: i64, y: i64) -> RatVec2 {
    [BigRational::from_integer(x.into()), BigRational::from_integer(y.into())]
}

/// `Δ = ⋂ᵢ {ξ : ⟨n_i, ξ⟩ ≥ λ_i}` with inward normals in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantPolygon {
    pub normals: Vec<RatVec2>,
    pub offsets: Vec<BigRational>,
}

impl DelzantPolygon {
    pub fn from_integers(normals: &[[i64; 2]], offsets: &[i64]) -> Self {
        DelzantPolygon {
            normals: normals.iter().map(|n| ratvec(n[0], n[1])).collect(),
            offsets: offsets.iter().map(|&l| BigRational::from_integer(l.into())).collect(),
        }
    }

    /// Integral normal `i`, if its entries are integers.
    pub fn integral_normal(&self, i: usize) -> Option<IntVec> {
        let n = &self.normals[i];
        n.iter()
            .all(|x| x.is_integer())
            .then(|| IntVec::new(n.iter().map(|x| x.to_integer()).collect()))
    }

    /// Vertex where facet `i` meets facet `i+1` (cyclically).
    pub fn vertex(&self, i: usize) -> Option<RatVec2> {
        let j = (i + 1) % self.normals.len();
        let (a, b) = (&self.normals[i], &self.normals[j]);
        let d = &a[0] * &b[1] - &a[1] * &b[0];
        if d.is_zero() {
            return None;
        }
        let (la, lb) = (&self.offsets[i], &self.offsets[j]);
        Some([
            (la * &b[1] - lb * &a[1]) / &d,
            (&a[0] * lb - &b[0] * la) / &d,
        ])
    }
}

fn rat_cross(a: &RatVec2, b: &RatVec2) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half_plane(v: &RatVec2) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

/// Exact comparison of polar angles in `[0, 2π)`.
fn angle_less(a: &RatVec2, b: &RatVec2) -> bool {
    let (ha, hb) = (half_plane(a), half_plane(b));
    ha < hb || (ha == hb && rat_cross(a, b).is_positive())
}

/// Checks the rational, simple, and non-singular conditions vertex by vertex.
///
/// Hard errors are reserved for inputs that do not describe a bounded
/// nonempty polygon with the given facets.
pub fn delzant_validate(poly: &DelzantPolygon) -> Result<ValidationReport> {
    let d = poly.normals.len();
    if d < 3 {
        return Err(Error::InvalidPolygon(format!("{d} facet(s), at least 3 are required")));
    }
    if poly.offsets.len() != d {
        return Err(Error::InvalidPolygon(format!(
            "{d} normals but {} offsets",
            poly.offsets.len()
        )));
    }
    for (i, n) in poly.normals.iter().enumerate() {
        if n[0].is_zero() && n[1].is_zero() {
            return Err(Error::InvalidPolygon(format!("normal {} is zero", i + 1)));
        }
    }
    // Bounded and counterclockwise: every turn is in (0, π) and the normals
    // wind exactly once.
    let mut wraps = 0;
    for i in 0..d {
        let j = (i + 1) % d;
        if !rat_cross(&poly.normals[i], &poly.normals[j]).is_positive() {
            return Err(Error::InvalidPolygon(format!(
                "unbounded or empty: normals {} and {} are not in strictly counterclockwise convex order",
                i + 1,
                j + 1
            )));
        }
        if !angle_less(&poly.normals[i], &poly.normals[j]) {
            wraps += 1;
        }
    }
    if wraps != 1 {
        return Err(Error::InvalidPolygon(format!(
            "normals wind {wraps} times around the origin, expected once"
        )));
    }

    let mut out = Findings(Vec::new());
    let integral: Vec<Option<IntVec>> = (0..d).map(|i| poly.integral_normal(i)).collect();
    for (i, n) in integral.iter().enumerate() {
        if n.is_none() {
            out.fail(CheckId::Rational, format!("facet {}", i + 1), "normal is not an integer vector");
        }
    }
    for i in 0..d {
        let j = (i + 1) % d;
        let loc = format!("vertex of facets {},{}", i + 1, j + 1);
        let v = poly.vertex(i).expect("consecutive normals are independent");
        for l in 0..d {
            if l == i || l == j {
                continue;
            }
            let n = &poly.normals[l];
            let slack = &n[0] * &v[0] + &n[1] * &v[1] - &poly.offsets[l];
            if slack.is_negative() {
                return Err(Error::InvalidPolygon(format!(
                    "empty or inconsistent: {loc} violates facet {}",
                    l + 1
                )));
            }
            if slack.is_zero() {
                out.fail(CheckId::Simple, loc.clone(), format!("facet {} also passes through it", l + 1));
            }
        }
        if let (Some(a), Some(b)) = (&integral[i], &integral[j]) {
            let dt = det2(a, b);
            if !dt.is_one() {
                out.fail(
                    CheckId::NonSingular,
                    loc,
                    format!("det(n{}, n{}) = {dt}, expected 1", i + 1, j + 1),
                );
            }
        }
    }
    Ok(ValidationReport::from_findings(out.0))
}

/// The toric manifold of a Delzant polygon as a twisted toric datum over a
/// disc with `d` corners and trivial monodromy.
pub fn delzant_to_spec(poly: &DelzantPolygon) -> Result<TwistedToricSpec> {
    let report = delzant_validate(poly)?;
    if !report.valid {
        return Err(Error::InvalidPolygon(report.to_string()));
    }
    let vectors = (0..poly.normals.len())
        .map(|i| poly.integral_normal(i).expect("validated"))
        .collect();
    Ok(TwistedToricSpec::new(
        BaseSurface::OneBoundary {
            genus: 0,
            corners: poly.normals.len(),
        },
        MonodromyRep::trivial(0),
        CharacteristicData::new(vectors),
    ))
}
