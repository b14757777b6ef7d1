//! E₂ page of the Leray spectral sequence of the moment map `X → B`.
//!
//! `E₂^{p,q}` is the cellular cohomology of the base with coefficients in the
//! degree-`q` fiber cohomology, restricted cell by cell to the image of the
//! collapsed fiber's cohomology. Coefficients on every cell are written in the
//! frame of the cell's tail vertex, and a face sees each boundary edge through
//! the accumulated holonomy of the word prefix before it.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{
    cokernel, hermite_basis, integer_solve, kernel_basis, rank, unimodular_inverse, AbelianGroup,
    IntMat, IntVec,
};
use crate::surface::{build_cw, CwComplex, Stratum};
use crate::ttm::{validate_spec, CheckId, TwistedToricSpec};

/// What a cell's torus fiber collapses to inside `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiberType {
    Full,
    /// `T²` modulo the circle generated by a primitive `u`.
    Circle(IntVec),
    Point,
}

/// Basis of the allowed coefficient subgroup `A_q ⊆ Λ^q((ℤ²)*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupBasis {
    pub ambient_rank: usize,
    pub basis: Vec<IntVec>,
}

impl SubgroupBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as the columns of an `ambient × rank` matrix.
    pub fn matrix(&self) -> IntMat {
        IntMat::from_columns(self.ambient_rank, &self.basis).expect("basis dimensions")
    }
}

fn ambient_rank(q: usize) -> Result<usize> {
    match q {
        0 | 2 => Ok(1),
        1 => Ok(2),
        _ => Err(Error::Shape(format!("fiber degree {q} out of range 0..=2"))),
    }
}

/// The image of `H^q` of the collapsed fiber inside `H^q(T²)`.
pub fn allowed_subgroup(fiber: &FiberType, q: usize) -> Result<SubgroupBasis> {
    let ambient = ambient_rank(q)?;
    let generators = match (fiber, q) {
        (_, 0) | (FiberType::Full, _) => (0..ambient).map(|i| IntVec::unit(ambient, i)).collect(),
        (FiberType::Circle(u), 1) => {
            if u.dim() != 2 || u.is_zero() {
                return Err(Error::Shape(format!("collapsed circle generator {u} is not a nonzero vector in Z^2")));
            }
            // covectors killing u
            let w = IntVec::new(vec![u[1].clone(), -u[0].clone()]);
            let c = w.content();
            vec![IntVec::new(w.entries().iter().map(|x| x / &c).collect())]
        }
        _ => Vec::new(),
    };
    Ok(SubgroupBasis {
        ambient_rank: ambient,
        basis: hermite_basis(&generators, ambient)?,
    })
}

/// Action of a holonomy on `H^q(T²)`: the contragredient on `H¹`, the
/// determinant on `H²`, trivial on `H⁰`.
pub fn coefficient_action(m: &IntMat, q: usize) -> Result<IntMat> {
    let inv = unimodular_inverse(m)?;
    match q {
        0 => Ok(IntMat::identity(1)),
        1 => Ok(inv.transpose()),
        2 => Ok(IntMat::from_vec(1, 1, vec![crate::lattice::det(m)?])?),
        _ => Err(Error::Shape(format!("fiber degree {q} out of range 0..=2"))),
    }
}

/// A labelled cell together with its allowed subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGroup {
    pub label: String,
    pub fiber: FiberType,
    pub subgroup: SubgroupBasis,
}

/// `C⁰ → C¹ → C²` with coefficients in the allowed subgroups.
///
/// `d0` has one block row per edge and one block column per vertex, `d1` one
/// block row for the face and a block column per edge; entries are in the
/// chosen subgroup bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalComplex {
    pub degree: usize,
    pub cells: [Vec<CellGroup>; 3],
    pub d0: IntMat,
    pub d1: IntMat,
}

impl LocalComplex {
    pub fn cochain_ranks(&self) -> [usize; 3] {
        [0, 1, 2].map(|p| self.cells[p].iter().map(|c| c.subgroup.rank()).sum())
    }

    /// `[H⁰, H¹, H²]` of the complex.
    pub fn cohomology(&self) -> [AbelianGroup; 3] {
        let n0 = self.cochain_ranks()[0];
        [
            AbelianGroup::free(n0 - rank(&self.d0)),
            subquotient(&self.d1, &self.d0),
            cokernel(&self.d1),
        ]
    }
}

/// `ker(outgoing) / im(incoming)`, assuming `outgoing · incoming = 0`.
fn subquotient(outgoing: &IntMat, incoming: &IntMat) -> AbelianGroup {
    let k = kernel_basis(outgoing);
    let mut coords = IntMat::zeros(k.cols(), incoming.cols());
    for j in 0..incoming.cols() {
        let x = integer_solve(&k, &incoming.column(j))
            .expect("dimensions agree")
            .expect("image lies in the saturated kernel");
        for i in 0..k.cols() {
            coords[(i, j)] = x[i].clone();
        }
    }
    cokernel(&coords)
}

fn fiber_of(stratum: Stratum, spec: &TwistedToricSpec) -> FiberType {
    match stratum {
        Stratum::Interior => FiberType::Full,
        Stratum::Arc(i) => FiberType::Circle(spec.characteristic.vectors[i].clone()),
        Stratum::Corner(_) => FiberType::Point,
    }
}

/// Expresses the columns of `image` in the basis of `target`, or reports the
/// first column that leaves the subgroup.
fn express_in(target: &CellGroup, image: &IntMat, source: &str) -> Result<IntMat> {
    let b = target.subgroup.matrix();
    let mut out = IntMat::zeros(target.subgroup.rank(), image.cols());
    for j in 0..image.cols() {
        let col = image.column(j);
        match integer_solve(&b, &col)? {
            Some(x) => {
                for i in 0..x.dim() {
                    out[(i, j)] = x[i].clone();
                }
            }
            None => {
                return Err(Error::Closure {
                    cell: target.label.clone(),
                    detail: format!(
                        "coboundary of {source} has value {col} outside the allowed subgroup"
                    ),
                })
            }
        }
    }
    Ok(out)
}

fn offsets(cells: &[CellGroup]) -> Vec<usize> {
    let mut acc = 0;
    cells
        .iter()
        .map(|c| {
            let o = acc;
            acc += c.subgroup.rank();
            o
        })
        .collect()
}

/// Builds the degree-`q` local coefficient complex of the base.
///
/// Data whose only defect is a characteristic lattice not preserved by a
/// cornerless boundary holonomy is accepted here and surfaces as
/// [`Error::Closure`] naming the cell where the coboundary escapes.
pub fn build_complex(spec: &TwistedToricSpec, q: usize) -> Result<LocalComplex> {
    ambient_rank(q)?;
    let report = validate_spec(spec);
    if report.failures().any(|f| f.check != CheckId::Lattice) {
        return Err(Error::InvalidSpec(report));
    }
    let cw = build_cw(&spec.base, &spec.monodromy)?;
    build_complex_on(&cw, spec, q)
}

fn build_complex_on(cw: &CwComplex, spec: &TwistedToricSpec, q: usize) -> Result<LocalComplex> {
    let group = |label: &str, stratum: Stratum| -> Result<CellGroup> {
        let fiber = fiber_of(stratum, spec);
        let subgroup = allowed_subgroup(&fiber, q)?;
        Ok(CellGroup {
            label: label.to_string(),
            fiber,
            subgroup,
        })
    };
    let vertices = cw
        .vertices
        .iter()
        .map(|v| group(&v.label, v.stratum))
        .collect::<Result<Vec<_>>>()?;
    let edges = cw
        .edges
        .iter()
        .map(|e| group(&e.label, e.stratum))
        .collect::<Result<Vec<_>>>()?;
    let faces = cw
        .faces
        .iter()
        .map(|f| group(&f.label, f.stratum))
        .collect::<Result<Vec<_>>>()?;

    let (v_off, e_off, f_off) = (offsets(&vertices), offsets(&edges), offsets(&faces));
    let ranks = |cells: &[CellGroup]| cells.iter().map(|c| c.subgroup.rank()).sum::<usize>();
    let mut d0 = IntMat::zeros(ranks(&edges), ranks(&vertices));
    let mut d1 = IntMat::zeros(ranks(&faces), ranks(&edges));
    let ambient = ambient_rank(q)?;

    // (δ⁰u)(e) = T(m_e)·u(head) − u(tail)
    for (ei, edge) in cw.edges.iter().enumerate() {
        let t = coefficient_action(&edge.monodromy, q)?;
        let mut touched: Vec<usize> = vec![edge.tail, edge.head];
        touched.dedup();
        for v in touched {
            let basis = vertices[v].subgroup.matrix();
            let mut image = IntMat::zeros(ambient, basis.cols());
            if v == edge.head {
                image = &image + &(&t * &basis);
            }
            if v == edge.tail {
                image = &image - &basis;
            }
            let block = express_in(&edges[ei], &image, &vertices[v].label)?;
            d0.set_block(e_off[ei], v_off[v], &block);
        }
    }

    // (δ¹u)(f) = Σ_j ±T(h_j ⋯)·u(s_j) along the attaching word
    for (fi, face) in cw.faces.iter().enumerate() {
        let mut images: Vec<Option<IntMat>> = vec![None; cw.edges.len()];
        let mut prefix = IntMat::identity(2);
        for &(ei, exp) in &face.word {
            let m = &cw.edges[ei].monodromy;
            let basis = edges[ei].subgroup.matrix();
            let (term, next_prefix) = if exp > 0 {
                let term = &coefficient_action(&prefix, q)? * &basis;
                (term, &prefix * m)
            } else {
                let next = &prefix * &unimodular_inverse(m)?;
                let term = -&(&coefficient_action(&next, q)? * &basis);
                (term, next)
            };
            let slot = &mut images[ei];
            *slot = Some(match slot.take() {
                Some(acc) => &acc + &term,
                None => term,
            });
            prefix = next_prefix;
        }
        if !prefix.is_identity() {
            return Err(Error::Closure {
                cell: face.label.clone(),
                detail: format!("holonomy around the attaching word is {prefix}, not the identity"),
            });
        }
        for (ei, image) in images.into_iter().enumerate() {
            if let Some(image) = image {
                let block = express_in(&faces[fi], &image, &edges[ei].label)?;
                d1.set_block(f_off[fi], e_off[ei], &block);
            }
        }
    }

    Ok(LocalComplex {
        degree: q,
        cells: [vertices, edges, faces],
        d0,
        d1,
    })
}

/// `E₂^{p,q}` for `p, q ∈ {0,1,2}`, stored as `grid[p][q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Table {
    pub grid: [[AbelianGroup; 3]; 3],
}

impl E2Table {
    pub fn get(&self, p: usize, q: usize) -> &AbelianGroup {
        &self.grid[p][q]
    }

    /// Terms on the anti-diagonal `p + q = k`.
    pub fn diagonal(&self, k: usize) -> Vec<&AbelianGroup> {
        (0..3)
            .filter(|&p| k >= p && k - p <= 2)
            .map(|p| self.get(p, k - p))
            .collect()
    }

    /// Alternating sum of free ranks, which is `χ(X)`.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0;
        for p in 0..3 {
            for q in 0..3 {
                let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
                chi += sign * self.get(p, q).free_rank as i64;
            }
        }
        chi
    }
}

impl fmt::Display for E2Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..3).rev() {
            write!(f, "q={q} |")?;
            for p in 0..3 {
                write!(f, " {:>10}", self.get(p, q).to_string())?;
            }
            writeln!(f)?;
        }
        write!(f, "      {:>10} {:>10} {:>10}", "p=0", "p=1", "p=2")
    }
}

pub fn e2_table(spec: &TwistedToricSpec) -> Result<E2Table> {
    let columns: Vec<[AbelianGroup; 3]> = (0..3)
        .map(|q| build_complex(spec, q).map(|c| c.cohomology()))
        .collect::<Result<_>>()?;
    let grid = [0, 1, 2].map(|p| [0, 1, 2].map(|q| columns[q][p].clone()));
    Ok(E2Table { grid })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    /// `H^k(X; ℤ)` for `k = 0..=4`.
    pub groups: Vec<AbelianGroup>,
    /// Set when some degree collects more than one nonzero E₂ term, so the
    /// reported group is the associated graded with split extensions.
    pub associated_graded: bool,
    pub e2: E2Table,
}

/// Integral cohomology of the total space from the E₂ page, which is where
/// the spectral sequence stops for bases with nonempty boundary.
pub fn cohomology_of_x(spec: &TwistedToricSpec) -> Result<CohomologyReport> {
    if spec.fiber_rank != 2 {
        return Err(Error::Unsupported(format!(
            "cohomology is implemented for fiber rank 2 only, got {}",
            spec.fiber_rank
        )));
    }
    spec.ensure_valid()?;
    let e2 = e2_table(spec)?;
    let mut associated_graded = false;
    let groups = (0..5)
        .map(|k| {
            let terms = e2.diagonal(k);
            if terms.iter().filter(|g| !g.is_trivial()).count() > 1 {
                associated_graded = true;
            }
            terms
                .into_iter()
                .fold(AbelianGroup::zero(), |acc, g| acc.direct_sum(g))
        })
        .collect();
    Ok(CohomologyReport {
        groups,
        associated_graded,
        e2,
    })
}
