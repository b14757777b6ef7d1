//! Base surfaces with corners and their polygon CW models.
//!
//! Two families are supported: a genus-`g` surface with one boundary circle
//! cut into arcs by `k` corners, and the cornerless cylinder. Every cell of
//! the generated complex lies in a single stratum, and every edge carries the
//! `SL₂(ℤ)` holonomy of the flat bundle along it.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{unimodular_inverse, IntMat};
use crate::ttm::MonodromyRep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSurface {
    /// Genus `genus` with one boundary circle carrying `corners` corner points.
    OneBoundary { genus: usize, corners: usize },
    /// `S¹ × [0,1]`; both boundary circles are cornerless.
    Cylinder,
}

impl BaseSurface {
    pub fn corner_count(&self) -> usize {
        match *self {
            BaseSurface::OneBoundary { corners, .. } => corners,
            BaseSurface::Cylinder => 0,
        }
    }

    /// Number of one-dimensional boundary strata; each carries one
    /// characteristic vector.
    pub fn arc_count(&self) -> usize {
        match *self {
            BaseSurface::OneBoundary { corners, .. } => corners.max(1),
            BaseSurface::Cylinder => 2,
        }
    }

    pub fn genus(&self) -> usize {
        match *self {
            BaseSurface::OneBoundary { genus, .. } => genus,
            BaseSurface::Cylinder => 0,
        }
    }

    /// Euler characteristic of the base itself.
    pub fn euler_characteristic(&self) -> i64 {
        match *self {
            BaseSurface::OneBoundary { genus, .. } => 1 - 2 * genus as i64,
            BaseSurface::Cylinder => 0,
        }
    }
}

impl fmt::Display for BaseSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSurface::OneBoundary { genus, corners } => {
                write!(f, "genus {genus}, one boundary circle, {corners} corner(s)")
            }
            BaseSurface::Cylinder => write!(f, "cylinder"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrataSummary {
    pub corner_count: usize,
    pub arc_count: usize,
    pub boundary_components: usize,
}

pub fn strata_summary(base: &BaseSurface) -> StrataSummary {
    StrataSummary {
        corner_count: base.corner_count(),
        arc_count: base.arc_count(),
        boundary_components: match base {
            BaseSurface::OneBoundary { .. } => 1,
            BaseSurface::Cylinder => 2,
        },
    }
}

/// The stratum of the base containing a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stratum {
    Interior,
    /// Inside boundary arc (or cornerless circle) `i`.
    Arc(usize),
    /// Corner point; `Corner(j)` is the start of arc `j`, so `Corner(0)` is
    /// where the last arc wraps round to the first.
    Corner(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub tail: usize,
    pub head: usize,
    /// Holonomy along the edge; it carries head-frame lattice vectors into
    /// the tail frame.
    pub monodromy: IntMat,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub label: String,
    /// Attaching word as `(edge index, ±1)`.
    pub word: Vec<(usize, i8)>,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwComplex {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
}

impl CwComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Start vertex of a signed edge traversal.
    pub fn traversal_start(&self, edge: usize, exp: i8) -> usize {
        let e = &self.edges[edge];
        if exp > 0 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn traversal_end(&self, edge: usize, exp: i8) -> usize {
        let e = &self.edges[edge];
        if exp > 0 {
            e.head
        } else {
            e.tail
        }
    }

    /// Checks that a face word is a closed edge path.
    pub fn word_is_closed(&self, word: &[(usize, i8)]) -> bool {
        let Some(&(first, e0)) = word.first() else {
            return false;
        };
        let start = self.traversal_start(first, e0);
        let mut at = start;
        for &(edge, exp) in word {
            if self.traversal_start(edge, exp) != at {
                return false;
            }
            at = self.traversal_end(edge, exp);
        }
        at == start
    }

    /// Ordered product of edge holonomies along a word.
    pub fn word_holonomy(&self, word: &[(usize, i8)]) -> Result<IntMat> {
        let mut acc = IntMat::identity(2);
        for &(edge, exp) in word {
            let m = &self.edges[edge].monodromy;
            acc = if exp > 0 {
                &acc * m
            } else {
                &acc * &unimodular_inverse(m)?
            };
        }
        Ok(acc)
    }
}

fn check_sl2(label: &str, m: &IntMat) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Shape(format!(
            "{label} is {}x{}, expected 2x2",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Builds the polygon CW model of the base with edge holonomies.
///
/// One-boundary surfaces use the word `a₁b₁a₁⁻¹b₁⁻¹⋯a_g b_g a_g⁻¹b_g⁻¹ γ₁⋯γ_m`
/// (`m = max(k,1)`), with the whole boundary holonomy placed on `γ_m`. The
/// cylinder uses `e₁ e₂ e₃ e₂⁻¹` with loop holonomies `M` and `M⁻¹`.
pub fn build_cw(base: &BaseSurface, monodromy: &MonodromyRep) -> Result<CwComplex> {
    match (*base, monodromy) {
        (BaseSurface::OneBoundary { genus, corners }, MonodromyRep::Surface { alphas, betas }) => {
            if alphas.len() != genus || betas.len() != genus {
                return Err(Error::Shape(format!(
                    "genus {genus} needs {genus} alpha and beta matrices, found {} and {}",
                    alphas.len(),
                    betas.len()
                )));
            }
            for (i, (a, b)) in alphas.iter().zip(betas).enumerate() {
                check_sl2(&format!("alpha[{i}]"), a)?;
                check_sl2(&format!("beta[{i}]"), b)?;
            }
            let arcs = corners.max(1);
            let vertices = (0..arcs)
                .map(|j| Vertex {
                    label: format!("v{}", j + 1),
                    stratum: if corners == 0 {
                        Stratum::Arc(0)
                    } else {
                        Stratum::Corner(j)
                    },
                })
                .collect();
            let mut edges = Vec::with_capacity(2 * genus + arcs);
            let mut word = Vec::with_capacity(4 * genus + arcs);
            for i in 0..genus {
                let a = edges.len();
                edges.push(Edge {
                    label: format!("a{}", i + 1),
                    tail: 0,
                    head: 0,
                    monodromy: alphas[i].clone(),
                    stratum: Stratum::Interior,
                });
                let b = edges.len();
                edges.push(Edge {
                    label: format!("b{}", i + 1),
                    tail: 0,
                    head: 0,
                    monodromy: betas[i].clone(),
                    stratum: Stratum::Interior,
                });
                word.extend([(a, 1), (b, 1), (a, -1), (b, -1)]);
            }
            let wrap = monodromy.boundary_holonomy()?;
            for j in 0..arcs {
                let idx = edges.len();
                edges.push(Edge {
                    label: format!("g{}", j + 1),
                    tail: j,
                    head: (j + 1) % arcs,
                    monodromy: if j + 1 == arcs {
                        wrap.clone()
                    } else {
                        IntMat::identity(2)
                    },
                    stratum: Stratum::Arc(j),
                });
                word.push((idx, 1));
            }
            Ok(CwComplex {
                vertices,
                edges,
                faces: vec![Face {
                    label: "f".into(),
                    word,
                    stratum: Stratum::Interior,
                }],
            })
        }
        (BaseSurface::Cylinder, MonodromyRep::Loop(m)) => {
            check_sl2("loop", m)?;
            let m_inv = unimodular_inverse(m)?;
            Ok(CwComplex {
                vertices: vec![
                    Vertex {
                        label: "v1".into(),
                        stratum: Stratum::Arc(0),
                    },
                    Vertex {
                        label: "v2".into(),
                        stratum: Stratum::Arc(1),
                    },
                ],
                edges: vec![
                    Edge {
                        label: "e1".into(),
                        tail: 0,
                        head: 0,
                        monodromy: m.clone(),
                        stratum: Stratum::Arc(0),
                    },
                    Edge {
                        label: "e2".into(),
                        tail: 0,
                        head: 1,
                        monodromy: IntMat::identity(2),
                        stratum: Stratum::Interior,
                    },
                    Edge {
                        label: "e3".into(),
                        tail: 1,
                        head: 1,
                        monodromy: m_inv,
                        stratum: Stratum::Arc(1),
                    },
                ],
                faces: vec![Face {
                    label: "f".into(),
                    word: vec![(0, 1), (1, 1), (2, 1), (1, -1)],
                    stratum: Stratum::Interior,
                }],
            })
        }
        (base, _) => Err(Error::Shape(format!(
            "monodromy shape does not match base ({base})"
        ))),
    }
}
