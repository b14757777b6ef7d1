//! Signature of `X`: Meyer's cocycle over a pants decomposition of the
//! interior plus the intersection form of the sphere necklace over the
//! boundary, glued by Novikov additivity.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{det2, kernel_basis, unimodular_inverse, IntMat, IntVec};
use crate::surface::BaseSurface;
use crate::ttm::{commutator, is_sl2, MonodromyRep, TwistedToricSpec};

/// Symmetric bilinear form with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSymForm {
    entries: Vec<Vec<BigRational>>,
}

impl RatSymForm {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("form rows must all have length {n}")));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Asymmetric(format!(
                        "entry ({i}, {j}) = {} but ({j}, {i}) = {}",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        Ok(RatSymForm { entries })
    }

    pub fn from_int_mat(m: &IntMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!("form matrix is {}x{}", m.rows(), m.cols())));
        }
        let entries = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| BigRational::from_integer(m[(i, j)].clone())).collect())
            .collect();
        RatSymForm::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }
}

/// `#positive − #negative` by symmetric Gaussian elimination.
pub fn signature_of_form(form: &RatSymForm) -> i64 {
    let mut a = form.entries.clone();
    let mut sig = 0i64;
    let mut live: Vec<usize> = (0..a.len()).collect();
    while !live.is_empty() {
        let pivot = match live.iter().position(|&i| !a[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = live.iter().enumerate().find_map(|(pi, &i)| {
                    live.iter().find(|&&j| j != i && !a[i][j].is_zero()).map(|&j| (pi, i, j))
                });
                let Some((pi, i, j)) = pair else { break };
                // e_i ↦ e_i + e_j makes the diagonal 2·a_ij
                for k in 0..a.len() {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..a.len() {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                pi
            }
        };
        let p = live.remove(pivot);
        let d = a[p][p].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        for &i in &live {
            let f = &a[i][p] / &d;
            for &j in &live {
                let v = &f * &a[p][j];
                a[i][j] -= v;
            }
        }
    }
    sig
}

/// `V = {(x, y) : (C₁⁻¹ − I)x + (C₂ − I)y = 0}` with the form
/// `⟨(x,y),(x',y')⟩ = (x + y)ᵀ J (I − C₂) y'`, on an integral basis of `V`.
pub fn meyer_form(c1: &IntMat, c2: &IntMat) -> Result<RatSymForm> {
    for (name, c) in [("C1", c1), ("C2", c2)] {
        if !is_sl2(c) {
            return Err(Error::NotSl2(format!("{name} = {c}")));
        }
    }
    let id = IntMat::identity(2);
    let left = &unimodular_inverse(c1)? - &id;
    let right = c2 - &id;
    let mut block = IntMat::zeros(2, 4);
    block.set_block(0, 0, &left);
    block.set_block(0, 2, &right);
    let v = kernel_basis(&block);
    let j = IntMat::mat2(0, 1, -1, 0);
    let pairing = &j * &(&id - c2);
    let split = |w: &IntVec| {
        let e = w.entries();
        (IntVec::new(e[..2].to_vec()), IntVec::new(e[2..].to_vec()))
    };
    let basis = v.columns();
    let mut m = IntMat::zeros(basis.len(), basis.len());
    for (a, wa) in basis.iter().enumerate() {
        let (x, y) = split(wa);
        let s = &x + &y;
        for (b, wb) in basis.iter().enumerate() {
            let (_, y2) = split(wb);
            m[(a, b)] = s.dot(&pairing.mul_vec(&y2));
        }
    }
    RatSymForm::from_int_mat(&m)
}

/// Meyer's `τ₁(C₁, C₂)`, the signature of one pants piece.
pub fn meyer_tau(c1: &IntMat, c2: &IntMat) -> Result<i64> {
    Ok(signature_of_form(&meyer_form(c1, c2)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PantsPair {
    pub c1: IntMat,
    pub c2: IntMat,
}

/// Holonomy pairs of a pants decomposition of a one-boundary surface: one
/// pair per handle, then one per junction gluing the handles in sequence.
pub fn pants_pairs(monodromy: &MonodromyRep) -> Result<Vec<PantsPair>> {
    let MonodromyRep::Surface { alphas, betas } = monodromy else {
        return Err(Error::Unsupported(
            "pants decompositions are defined for one-boundary bases only".into(),
        ));
    };
    if alphas.len() != betas.len() {
        return Err(Error::Shape(format!("{} alpha and {} beta matrices", alphas.len(), betas.len())));
    }
    let mut pairs = Vec::new();
    let mut commutators = Vec::new();
    for (a, b) in alphas.iter().zip(betas) {
        let a_inv = unimodular_inverse(a)?;
        let b_inv = unimodular_inverse(b)?;
        pairs.push(PantsPair {
            c1: a.clone(),
            c2: &(b * &a_inv) * &b_inv,
        });
        commutators.push(commutator(a, b)?);
    }
    let mut running = commutators.first().cloned().unwrap_or_else(|| IntMat::identity(2));
    for d in commutators.iter().skip(1) {
        pairs.push(PantsPair {
            c1: running.clone(),
            c2: d.clone(),
        });
        running = &running * d;
    }
    Ok(pairs)
}

/// Spheres over the closed boundary arcs, each recorded by its collapsing
/// vector. Entry `i` is written in its own frame; crossing from the last
/// entry to the first applies `wrap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceModel {
    pub vectors: Vec<IntVec>,
    pub wrap: IntMat,
    pub exceptional: Vec<bool>,
}

impl NecklaceModel {
    pub fn from_spec(spec: &TwistedToricSpec) -> Result<Self> {
        let wrap = spec.monodromy.boundary_holonomy()?;
        let vectors = spec.characteristic.vectors.clone();
        let exceptional = vec![false; vectors.len()];
        Ok(NecklaceModel {
            vectors,
            wrap,
            exceptional,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Neighbors of entry `i` expressed in entry `i`'s frame.
    pub fn neighbors(&self, i: usize) -> Result<(IntVec, IntVec)> {
        let k = self.len();
        let prev = if i == 0 {
            self.wrap.mul_vec(&self.vectors[k - 1])
        } else {
            self.vectors[i - 1].clone()
        };
        let next = if i + 1 == k {
            unimodular_inverse(&self.wrap)?.mul_vec(&self.vectors[0])
        } else {
            self.vectors[i + 1].clone()
        };
        Ok((prev, next))
    }

    /// Corner determinants, the last one across the wrap.
    pub fn corner_determinants(&self) -> Vec<BigInt> {
        let k = self.len();
        (0..k)
            .map(|j| {
                if j + 1 < k {
                    det2(&self.vectors[j], &self.vectors[j + 1])
                } else {
                    det2(&self.wrap.mul_vec(&self.vectors[k - 1]), &self.vectors[0])
                }
            })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        !self.is_empty()
            && self.exceptional.len() == self.len()
            && self.corner_determinants().iter().all(|d| *d == BigInt::from(1))
    }

    pub fn self_intersection(&self, i: usize) -> Result<BigInt> {
        let (prev, next) = self.neighbors(i)?;
        Ok(-det2(&prev, &next))
    }
}

impl fmt::Display for NecklaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vectors
            .iter()
            .zip(&self.exceptional)
            .map(|(v, &e)| if e { format!("{v}*") } else { v.to_string() })
            .collect();
        write!(f, "{} / wrap {}", parts.join(", "), self.wrap)
    }
}

/// Blows up a corner point. Corner `j < k − 1` lies between entries `j` and
/// `j + 1`; corner `k − 1` is the wrap corner.
pub fn blow_up(necklace: &NecklaceModel, corner: usize) -> Result<NecklaceModel> {
    let k = necklace.len();
    if corner >= k {
        return Err(Error::InvalidCorner { index: corner, len: k });
    }
    if !necklace.is_valid() {
        return Err(Error::InvalidNecklace(format!("corner determinants {:?} are not all 1", necklace.corner_determinants())));
    }
    let mut out = necklace.clone();
    if corner + 1 == k {
        let v = &necklace.wrap.mul_vec(&necklace.vectors[k - 1]) + &necklace.vectors[0];
        out.vectors.insert(0, v);
        out.exceptional.insert(0, true);
    } else {
        let v = &necklace.vectors[corner] + &necklace.vectors[corner + 1];
        out.vectors.insert(corner + 1, v);
        out.exceptional.insert(corner + 1, true);
    }
    Ok(out)
}

/// Intersection matrix of the necklace spheres.
pub fn boundary_intersection_matrix(necklace: &NecklaceModel) -> Result<IntMat> {
    let k = necklace.len();
    if k < 2 {
        return Err(Error::InvalidNecklace(format!("intersection matrix needs at least 2 spheres, got {k}")));
    }
    let mut m = IntMat::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = necklace.self_intersection(i)?;
        for j in 0..k {
            if i == j {
                continue;
            }
            let adjacent = (i + 1) % k == j || (j + 1) % k == i;
            m[(i, j)] = BigInt::from(match (k, adjacent) {
                (2, _) => 2,
                (_, true) => 1,
                _ => 0,
            });
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureBreakdown {
    pub interior_terms: Vec<(PantsPair, i64)>,
    /// The necklace the boundary matrix was read from, after any blow-up.
    pub necklace: NecklaceModel,
    pub boundary_matrix: IntMat,
    pub blowup_count: usize,
    pub sigma_interior: i64,
    pub sigma_boundary: i64,
    pub total: i64,
}

pub fn signature_total(spec: &TwistedToricSpec) -> Result<SignatureBreakdown> {
    match spec.base {
        BaseSurface::OneBoundary { corners, .. } if corners >= 1 => {}
        _ => {
            return Err(Error::Unsupported(format!(
                "the signature is computed only over a base with one boundary circle and at least one corner point, got: {}",
                spec.base
            )))
        }
    }
    let report = spec.validate();
    if !report.valid {
        return Err(Error::InvalidSpec(report));
    }
    if !report.is_oriented() {
        let places: Vec<&str> = report.findings.iter().map(|f| f.location.as_str()).collect();
        return Err(Error::InvalidNecklace(format!(
            "the signature needs det = +1 at every corner, orientation is reversed at {}",
            places.join("; ")
        )));
    }
    let interior_terms = pants_pairs(&spec.monodromy)?
        .into_iter()
        .map(|p| meyer_tau(&p.c1, &p.c2).map(|t| (p, t)))
        .collect::<Result<Vec<_>>>()?;
    let sigma_interior = interior_terms.iter().map(|(_, t)| t).sum();

    let mut necklace = NecklaceModel::from_spec(spec)?;
    let mut blowup_count = 0;
    if necklace.len() == 1 {
        necklace = blow_up(&necklace, 0)?;
        blowup_count = 1;
    }
    let boundary_matrix = boundary_intersection_matrix(&necklace)?;
    let sigma_boundary = signature_of_form(&RatSymForm::from_int_mat(&boundary_matrix)?) + blowup_count as i64;
    Ok(SignatureBreakdown {
        interior_terms,
        necklace,
        boundary_matrix,
        blowup_count,
        sigma_interior,
        sigma_boundary,
        total: sigma_interior + sigma_boundary,
    })
}
