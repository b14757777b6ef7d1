//! Closed-form invariants: Euler characteristic and fundamental group.

use std::fmt;

use crate::cohomology::cohomology_of_x;
use crate::error::{Error, Result};
use crate::lattice::{cokernel, AbelianGroup, IntMat};
use crate::surface::BaseSurface;
use crate::ttm::TwistedToricSpec;

/// A word in the generators, as `(generator index, exponent)` syllables.
pub type Word = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    Free(usize),
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Trivial => write!(f, "trivial"),
            Classification::Free(r) => write!(f, "free of rank {r}"),
            Classification::Other => write!(f, "other"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub classification: Classification,
}

/// Freely and cyclically reduces a word, merging adjacent syllables.
pub fn reduce_word(word: &[(usize, i64)]) -> Word {
    let mut out: Word = Vec::new();
    for &(g, e) in word {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    // cyclic reduction
    while out.len() > 1 && out[0].0 == out[out.len() - 1].0 {
        let (_, e) = out.pop().unwrap();
        out[0].1 += e;
        if out[0].1 == 0 {
            out.remove(0);
        }
    }
    out
}

fn invert(word: &[(usize, i64)]) -> Word {
    word.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

impl GroupPresentation {
    /// Builds a presentation and simplifies it.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        let mut p = GroupPresentation {
            generators,
            relators,
            classification: Classification::Other,
        };
        p.simplify();
        p
    }

    /// Applies Tietze moves that need no search: drops trivial relators and
    /// eliminates any generator occurring exactly once, with exponent ±1, in
    /// some relator. Then sets the classification.
    pub fn simplify(&mut self) {
        loop {
            self.relators = self
                .relators
                .iter()
                .map(|r| reduce_word(r))
                .filter(|r| !r.is_empty())
                .collect();
            let Some((ri, pos)) = self.find_eliminable() else { break };
            let r = self.relators.remove(ri);
            let (x, eps) = r[pos];
            // rotate so x^eps leads: x^eps · w = 1
            let w: Word = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
            let replacement = if eps == 1 { invert(&w) } else { w };
            self.relators = self
                .relators
                .iter()
                .map(|rel| substitute(rel, x, &replacement))
                .collect();
            self.generators.remove(x);
            for rel in &mut self.relators {
                for syl in rel.iter_mut() {
                    if syl.0 > x {
                        syl.0 -= 1;
                    }
                }
            }
        }
        self.classification = if !self.relators.is_empty() {
            Classification::Other
        } else if self.generators.is_empty() {
            Classification::Trivial
        } else {
            Classification::Free(self.generators.len())
        };
    }

    fn find_eliminable(&self) -> Option<(usize, usize)> {
        for (ri, r) in self.relators.iter().enumerate() {
            for (pos, &(g, e)) in r.iter().enumerate() {
                let count = r.iter().filter(|s| s.0 == g).count();
                if count == 1 && e.abs() == 1 {
                    return Some((ri, pos));
                }
            }
        }
        None
    }

    /// Cokernel of the exponent-sum matrix, one column per relator.
    pub fn abelianization(&self) -> AbelianGroup {
        let mut m = IntMat::zeros(self.generators.len(), self.relators.len());
        for (i, r) in self.relators.iter().enumerate() {
            for &(g, e) in r {
                m[(g, i)] += e;
            }
        }
        cokernel(&m)
    }

    pub fn render_word(&self, word: &[(usize, i64)]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter()
            .map(|&(g, e)| match e {
                1 => self.generators[g].clone(),
                _ => format!("{}^{e}", self.generators[g]),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn substitute(word: &[(usize, i64)], x: usize, replacement: &[(usize, i64)]) -> Word {
    let mut out = Word::new();
    for &(g, e) in word {
        if g != x {
            out.push((g, e));
            continue;
        }
        let piece = if e > 0 { replacement.to_vec() } else { invert(replacement) };
        for _ in 0..e.abs() {
            out.extend_from_slice(&piece);
        }
    }
    out
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Number of corner points, which is `χ(X)`.
pub fn euler_characteristic(spec: &TwistedToricSpec) -> Result<i64> {
    spec.ensure_valid()?;
    Ok(spec.base.corner_count() as i64)
}

/// `χ(X)` recomputed as the alternating sum of Betti numbers.
pub fn euler_characteristic_from_cohomology(spec: &TwistedToricSpec) -> Result<i64> {
    let report = cohomology_of_x(spec)?;
    Ok(report
        .groups
        .iter()
        .enumerate()
        .map(|(k, g)| if k % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) })
        .sum())
}

/// `π₁(X)`, which the moment map identifies with `π₁(B)` when the base has a
/// corner point.
pub fn fundamental_group(spec: &TwistedToricSpec) -> Result<GroupPresentation> {
    let genus = match spec.base {
        BaseSurface::OneBoundary { genus, corners } if corners >= 1 => genus,
        BaseSurface::OneBoundary { .. } => {
            return Err(Error::Unsupported(
                "the fundamental group is identified with that of the base only when the base has at least one corner point; this base has none".into(),
            ))
        }
        BaseSurface::Cylinder => {
            return Err(Error::Unsupported(
                "the fundamental group is identified with that of the base only when the base has at least one corner point; the cylinder has none".into(),
            ))
        }
    };
    spec.ensure_valid()?;
    let mut generators = Vec::new();
    let mut relation = Word::new();
    for i in 0..genus {
        generators.push(format!("a{}", i + 1));
        generators.push(format!("b{}", i + 1));
        let (a, b) = (2 * i, 2 * i + 1);
        relation.extend([(a, 1), (b, 1), (a, -1), (b, -1)]);
    }
    generators.push("c".into());
    relation.push((2 * genus, 1));
    Ok(GroupPresentation::new(generators, vec![relation]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ttm::{CharacteristicData, MonodromyRep};

    fn spec(genus: usize, corners: usize, vectors: &[[i64; 2]]) -> TwistedToricSpec {
        TwistedToricSpec::new(
            BaseSurface::OneBoundary { genus, corners },
            MonodromyRep::trivial(genus),
            CharacteristicData::from_i64s(vectors),
        )
    }

    #[test]
    fn reduce_cancels_and_merges() {
        assert_eq!(reduce_word(&[(0, 1), (1, 2), (1, -2), (0, 1)]), vec![(0, 2)]);
        assert_eq!(reduce_word(&[(0, 1), (1, 1), (0, -1)]), vec![(1, 1)]);
        assert!(reduce_word(&[(0, 1), (1, 1), (1, -1), (0, -1)]).is_empty());
    }

    #[test]
    fn boundary_generator_is_eliminated() {
        let genus_two = TwistedToricSpec::new(
            BaseSurface::OneBoundary { genus: 2, corners: 1 },
            MonodromyRep::Surface {
                alphas: vec![IntMat::mat2(1, 0, -1, 1), IntMat::identity(2)],
                betas: vec![IntMat::mat2(1, -1, 0, 1), IntMat::identity(2)],
            },
            CharacteristicData::from_i64s(&[[0, 1]]),
        );
        let p = fundamental_group(&genus_two).unwrap();
        assert_eq!(p.classification, Classification::Free(4));
        assert_eq!(p.generators, vec!["a1", "b1", "a2", "b2"]);
        assert_eq!(p.abelianization(), AbelianGroup::free(4));
    }

    #[test]
    fn triangle_base_is_simply_connected() {
        let p = fundamental_group(&spec(0, 3, &[[1, 0], [0, 1], [-1, -1]])).unwrap();
        assert_eq!(p.classification, Classification::Trivial);
        assert_eq!(p.abelianization(), AbelianGroup::zero());
    }

    #[test]
    fn cornerless_bases_are_refused() {
        let err = fundamental_group(&spec(1, 0, &[[0, 1]])).unwrap_err();
        assert!(err.is_unsupported());
        assert!(err.to_string().contains("corner point"));
        let cyl = TwistedToricSpec::new(
            BaseSurface::Cylinder,
            MonodromyRep::Loop(IntMat::identity(2)),
            CharacteristicData::from_i64s(&[[0, 1], [0, 1]]),
        );
        assert!(fundamental_group(&cyl).unwrap_err().is_unsupported());
    }

    #[test]
    fn torsion_survives_abelianization() {
        let p = GroupPresentation::new(vec!["x".into(), "y".into()], vec![vec![(0, 2)], vec![(0, 1), (1, 1), (0, -1), (1, -1)]]);
        assert_eq!(p.classification, Classification::Other);
        assert_eq!(p.abelianization(), AbelianGroup::from_i64(1, &[2]));
    }

    #[test]
    fn euler_characteristic_counts_corners() {
        let square = spec(0, 4, &[[1, 0], [0, 1], [-1, 0], [0, -1]]);
        assert_eq!(euler_characteristic(&square).unwrap(), 4);
        assert_eq!(euler_characteristic_from_cohomology(&square).unwrap(), 4);
    }
}
