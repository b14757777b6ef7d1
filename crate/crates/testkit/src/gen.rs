use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttm_core::lattice::unimodular_inverse;
use ttm_core::signature::{blow_up, NecklaceModel};
use ttm_core::{BaseSurface, CharacteristicData, IntMat, IntVec, MonodromyRep, TwistedToricSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn s() -> IntMat {
    IntMat::mat2(0, -1, 1, 0)
}

pub fn t() -> IntMat {
    IntMat::mat2(1, 1, 0, 1)
}

/// Product of up to `max_len` letters from `S, T, S⁻¹, T⁻¹`.
pub fn sl2_word<R: Rng>(rng: &mut R, max_len: usize) -> IntMat {
    let letters = [s(), t(), unimodular_inverse(&s()).unwrap(), unimodular_inverse(&t()).unwrap()];
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(IntMat::identity(2), |acc, _| &acc * letters.choose(rng).unwrap())
}

pub fn int_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMat {
    let mut m = IntMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.gen_range(-bound..=bound).into();
        }
    }
    m
}

pub fn primitive_vector<R: Rng>(rng: &mut R) -> IntVec {
    loop {
        let (a, b) = (rng.gen_range(-5i64..=5), rng.gen_range(-5i64..=5));
        if a.gcd(&b) == 1 {
            return IntVec::from_i64s(&[a, b]);
        }
    }
}

fn shear_pairs<R: Rng>(rng: &mut R, genus: usize) -> MonodromyRep {
    let a: Vec<i64> = (0..genus).map(|_| rng.gen_range(-3..=3)).collect();
    let b: Vec<i64> = (0..genus).map(|_| rng.gen_range(-3..=3)).collect();
    MonodromyRep::shears(&a, &b)
}

/// Handle monodromies with boundary holonomy `[[3,1],[−1,0]]`, so that the
/// single vector `(0, 1)` closes up with one corner. Extra handles are shears.
fn one_corner_torus<R: Rng>(rng: &mut R, genus: usize) -> MonodromyRep {
    let MonodromyRep::Surface { mut alphas, mut betas } = shear_pairs(rng, genus) else { unreachable!() };
    alphas[0] = IntMat::mat2(1, 0, -1, 1);
    betas[0] = IntMat::mat2(1, -1, 0, 1);
    MonodromyRep::Surface { alphas, betas }
}

fn planar_necklace<R: Rng>(rng: &mut R) -> Vec<[i64; 2]> {
    match rng.gen_range(0..3) {
        0 => vec![[1, 0], [0, 1], [-1, -1]],
        1 => vec![[1, 0], [0, 1], [-1, 0], [0, -1]],
        _ => vec![[1, 0], [0, 1], [-1, rng.gen_range(-3..=3)], [0, -1]],
    }
}

fn with_vectors(spec: &TwistedToricSpec, vectors: Vec<IntVec>) -> TwistedToricSpec {
    let genus = spec.base.genus();
    TwistedToricSpec::new(
        BaseSurface::OneBoundary { genus, corners: vectors.len() },
        spec.monodromy.clone(),
        CharacteristicData::new(vectors),
    )
}

/// Blows up `count` random corners of a spec with corners.
pub fn blow_up_spec<R: Rng>(rng: &mut R, spec: &TwistedToricSpec, count: usize) -> TwistedToricSpec {
    let mut necklace = NecklaceModel::from_spec(spec).unwrap();
    for _ in 0..count {
        let corner = rng.gen_range(0..necklace.len());
        necklace = blow_up(&necklace, corner).unwrap();
    }
    with_vectors(spec, necklace.vectors)
}

/// Conjugates the whole datum by `h`, which preserves validity.
pub fn change_frame(spec: &TwistedToricSpec, h: &IntMat) -> TwistedToricSpec {
    let h_inv = unimodular_inverse(h).unwrap();
    let conj = |m: &IntMat| &(h * m) * &h_inv;
    let monodromy = match &spec.monodromy {
        MonodromyRep::Surface { alphas, betas } => MonodromyRep::Surface {
            alphas: alphas.iter().map(conj).collect(),
            betas: betas.iter().map(conj).collect(),
        },
        MonodromyRep::Loop(m) => MonodromyRep::Loop(conj(m)),
    };
    let vectors = spec.characteristic.vectors.iter().map(|u| h.mul_vec(u)).collect();
    TwistedToricSpec {
        fiber_rank: spec.fiber_rank,
        base: spec.base.clone(),
        monodromy,
        characteristic: CharacteristicData::new(vectors),
    }
}

/// A valid spec with at least one corner and orientation-compatible vectors.
pub fn cornered_spec<R: Rng>(rng: &mut R) -> TwistedToricSpec {
    let base = if rng.gen_bool(0.5) {
        let genus = rng.gen_range(0..=2);
        let vectors = planar_necklace(rng);
        TwistedToricSpec::new(
            BaseSurface::OneBoundary { genus, corners: vectors.len() },
            shear_pairs(rng, genus),
            CharacteristicData::from_i64s(&vectors),
        )
    } else {
        let genus = rng.gen_range(1..=2);
        TwistedToricSpec::new(
            BaseSurface::OneBoundary { genus, corners: 1 },
            one_corner_torus(rng, genus),
            CharacteristicData::from_i64s(&[[0, 1]]),
        )
    };
    let count = rng.gen_range(0..=3);
    let blown = blow_up_spec(rng, &base, count);
    change_frame(&blown, &sl2_word(rng, 6))
}

/// A valid spec over any supported base: cornered, cornerless, or cylinder.
pub fn valid_spec<R: Rng>(rng: &mut R) -> TwistedToricSpec {
    let spec = match rng.gen_range(0..4) {
        0 | 1 => return cornered_spec(rng),
        2 => {
            let genus = rng.gen_range(1..=2);
            TwistedToricSpec::new(
                BaseSurface::OneBoundary { genus, corners: 0 },
                shear_pairs(rng, genus),
                CharacteristicData::new(vec![primitive_vector(rng)]),
            )
        }
        _ => {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let n = rng.gen_range(-3..=3);
            let m = IntMat::mat2(sign, sign * n, 0, sign);
            let mut pick = || IntVec::from_i64s(&[if rng.gen_bool(0.5) { 1 } else { -1 }, 0]);
            let (u1, u2) = (pick(), pick());
            TwistedToricSpec::new(BaseSurface::Cylinder, MonodromyRep::Loop(m), CharacteristicData::new(vec![u1, u2]))
        }
    };
    change_frame(&spec, &sl2_word(rng, 6))
}

/// A cornerless spec with arbitrary handle monodromy and a random vector,
/// which may or may not be preserved by the boundary holonomy.
pub fn cornerless_spec<R: Rng>(rng: &mut R) -> TwistedToricSpec {
    let genus = rng.gen_range(1..=2);
    let monodromy = if rng.gen_bool(0.3) {
        shear_pairs(rng, genus)
    } else {
        MonodromyRep::Surface {
            alphas: (0..genus).map(|_| sl2_word(rng, 4)).collect(),
            betas: (0..genus).map(|_| sl2_word(rng, 4)).collect(),
        }
    };
    TwistedToricSpec::new(
        BaseSurface::OneBoundary { genus, corners: 0 },
        monodromy,
        CharacteristicData::new(vec![primitive_vector(rng)]),
    )
}
