//! Built-in orbits: the two worked examples, Jordan-block building blocks,
//! direct sums, randomly conjugated split orbits for fuzzing, and their
//! `exp(cN)` twists.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hodge::{
    build_limit_mhs, check_kernel_injectivity, is_r_split, validate_orbit, HodgeError,
    NilpotentOrbit,
};
use crate::linalg::{to_i64_rows, Direction, Filtration, GScalar, GVector, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("illegal Hodge shape: {0}")]
    IllegalShape(String),
    #[error("unknown example `{0}`")]
    UnknownRecipe(String),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}

fn line(dim: usize, idx: &[usize]) -> Subspace {
    let vs: Vec<GVector> = idx.iter().map(|&i| GVector::unit(dim, i)).collect();
    Subspace::echelonize(dim, &vs).expect("unit vectors")
}

/// Rank 2, `w = -1`, `N e0 = e1`, `F^0 = span(e0)`.
pub fn split_rank_two() -> NilpotentOrbit {
    let f = Filtration::new(
        Direction::Decreasing,
        2,
        BTreeMap::from([(0, line(2, &[0]))]),
    )
    .expect("nested");
    NilpotentOrbit::new(-1, vec![vec![0, 0], vec![1, 0]], f, "split-rank2").expect("well formed")
}

/// Rank 4 on the basis `(e0, e1, f0, f1)`, `w = -1`, `N e0 = e1`,
/// `N f0 = f1`, `F^0 = span(e0 - i f0, e1 - i f1)` and `F^1 = 0`.
pub fn twisted_rank_four() -> NilpotentOrbit {
    let i = GScalar::i();
    let v = |k: usize| {
        let mut x = GVector::unit(4, k);
        x[k + 2] = -i.clone();
        x
    };
    let f0 = Subspace::echelonize(4, &[v(0), v(1)]).expect("dims");
    let f = Filtration::new(Direction::Decreasing, 4, BTreeMap::from([(0, f0)])).expect("nested");
    let n = vec![
        vec![0, 0, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 0, 0],
        vec![0, 0, 1, 0],
    ];
    NilpotentOrbit::new(-1, n, f, "twisted-rank4").expect("well formed")
}

/// Rank 1, `N = 0`, `w = -1`, `F^0 = 0`: a filtration that cannot be pure.
pub fn impure_rank_one() -> NilpotentOrbit {
    let f = Filtration::new(
        Direction::Decreasing,
        1,
        BTreeMap::from([(0, Subspace::zero(1))]),
    )
    .expect("nested");
    NilpotentOrbit::new(-1, vec![vec![0]], f, "impure-rank1").expect("well formed")
}

/// Jordan block with divided-power normalization `N e_t = (t+1) e_{t+1}`,
/// so that `exp(N)` is integral for every size.
fn jordan_block(size: usize) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0i64; size]; size];
    for t in 0..size.saturating_sub(1) {
        rows[t + 1][t] = t as i64 + 1;
    }
    rows
}

/// A nilpotent orbit whose weight filtration is that of Jordan blocks of
/// the given `size` centered at `w`.
///
/// When `w + size - 1` is even and `hodge_shift == 0` this is a single real
/// block whose top vector has type `(p, p)`. Otherwise it is a pair of
/// blocks `e`, `f` with top vector `e0 - i f0` of type `(p, q)`, `p > q`,
/// and its conjugate; `hodge_shift` pushes `p` further up.
pub fn jordan_orbit(size: usize, w: i32, hodge_shift: i32) -> Result<NilpotentOrbit, CorpusError> {
    if size == 0 {
        return Err(CorpusError::IllegalShape(
            "block size must be at least 1".into(),
        ));
    }
    if hodge_shift < 0 {
        return Err(CorpusError::IllegalShape(format!(
            "hodge shift must be non-negative, got {hodge_shift}"
        )));
    }
    let j = size as i32 - 1;
    let top = w + j;
    let block = Matrix::from_int_rows(&jordan_block(size)).expect("square");
    let label = format!("jordan({size},{w},{hodge_shift})");

    if top.rem_euclid(2) == 0 && hodge_shift == 0 {
        let p = top / 2;
        let mut gens: BTreeMap<i32, Vec<GVector>> = BTreeMap::new();
        for l in 0..size {
            gens.entry(p - l as i32)
                .or_default()
                .push(GVector::unit(size, l));
        }
        let f = Filtration::decreasing_closure(size, &gens).map_err(HodgeError::from)?;
        return Ok(NilpotentOrbit::new(w, jordan_block(size), f, label)?);
    }

    let p = if top.rem_euclid(2) == 1 {
        (top + 1).div_euclid(2) + hodge_shift
    } else {
        top / 2 + 1 + hodge_shift
    };
    let q = top - p;
    let dim = 2 * size;
    let n = Matrix::block_diag(&[block.clone(), block]);
    let mut v = GVector::unit(dim, 0);
    v[size] = -GScalar::i();
    let vbar = v.conj();
    let mut gens: BTreeMap<i32, Vec<GVector>> = BTreeMap::new();
    let (mut x, mut y) = (v, vbar);
    for l in 0..size as i32 {
        gens.entry(p - l).or_default().push(x.clone());
        gens.entry(q - l).or_default().push(y.clone());
        x = n.apply(&x).expect("square");
        y = n.apply(&y).expect("square");
    }
    let f = Filtration::decreasing_closure(dim, &gens).map_err(HodgeError::from)?;
    let rows = to_i64_rows(&n).expect("integer");
    Ok(NilpotentOrbit::new(w, rows, f, label)?)
}

/// Block direct sum; all summands must share the weight.
pub fn direct_sum(parts: &[NilpotentOrbit]) -> Result<NilpotentOrbit, CorpusError> {
    let Some(first) = parts.first() else {
        return Err(CorpusError::IllegalShape("empty direct sum".into()));
    };
    let w = first.weight();
    if let Some(bad) = parts.iter().find(|o| o.weight() != w) {
        return Err(CorpusError::IllegalShape(format!(
            "summands have weights {w} and {}",
            bad.weight()
        )));
    }
    let dim: usize = parts.iter().map(|o| o.rank()).sum();
    let n = Matrix::block_diag(&parts.iter().map(|o| o.n().clone()).collect::<Vec<_>>());
    let bounds: Vec<(i32, i32)> = parts.iter().filter_map(|o| o.hodge().bounds()).collect();
    let lo = bounds.iter().map(|b| b.0).min().unwrap_or(0);
    let hi = bounds.iter().map(|b| b.1).max().unwrap_or(-1);
    let mut levels = BTreeMap::new();
    for p in lo..=hi {
        let mut vs = Vec::new();
        let mut offset = 0;
        for o in parts {
            for b in o.f(p).basis() {
                let mut x = GVector::zeros(dim);
                for (t, c) in b.iter().enumerate() {
                    x[offset + t] = c.clone();
                }
                vs.push(x);
            }
            offset += o.rank();
        }
        levels.insert(p, Subspace::echelonize(dim, &vs).map_err(HodgeError::from)?);
    }
    let f = Filtration::new(Direction::Decreasing, dim, levels).map_err(HodgeError::from)?;
    let label = parts
        .iter()
        .map(|o| o.label())
        .collect::<Vec<_>>()
        .join("+");
    Ok(NilpotentOrbit::new(
        w,
        to_i64_rows(&n).expect("integer"),
        f,
        label,
    )?)
}

/// Blocks of a split orbit: `(size, hodge_shift)` pairs at a common weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitShape {
    pub weight: i32,
    pub blocks: Vec<(usize, i32)>,
}

impl SplitShape {
    pub fn random(rng: &mut impl Rng) -> Self {
        let weight = -rng.gen_range(1..=2);
        let count = rng.gen_range(1..=3);
        let blocks = (0..count)
            .map(|_| (rng.gen_range(1..=3), rng.gen_range(0..=1)))
            .collect();
        SplitShape { weight, blocks }
    }
}

/// Conjugate the split orbit of `shape` by a random unipotent integral
/// matrix, so the lattice is preserved but the splittings no longer line up
/// with the standard basis.
pub fn random_split_orbit_with_shape(
    seed: u64,
    shape: &SplitShape,
) -> Result<NilpotentOrbit, CorpusError> {
    let parts = shape
        .blocks
        .iter()
        .map(|&(size, shift)| jordan_orbit(size, shape.weight, shift))
        .collect::<Result<Vec<_>, _>>()?;
    let split = direct_sum(&parts)?;
    let dim = split.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0b17);
    let mut g = Matrix::identity(dim);
    let mut g_inv = Matrix::identity(dim);
    if dim > 1 {
        for _ in 0..2 * dim {
            let a = rng.gen_range(0..dim);
            let mut b = rng.gen_range(0..dim - 1);
            if b >= a {
                b += 1;
            }
            let c: i64 = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut e = Matrix::identity(dim);
            e[(a, b)] = GScalar::from_int(c);
            let mut e_inv = Matrix::identity(dim);
            e_inv[(a, b)] = GScalar::from_int(-c);
            g = e.mul(&g).map_err(HodgeError::from)?;
            g_inv = g_inv.mul(&e_inv).map_err(HodgeError::from)?;
        }
    }
    let n = g
        .mul(split.n())
        .and_then(|m| m.mul(&g_inv))
        .map_err(HodgeError::from)?;
    let mut levels = BTreeMap::new();
    for (&p, s) in split.hodge().levels() {
        levels.insert(p, s.image_under(&g).map_err(HodgeError::from)?);
    }
    let f = Filtration::new(Direction::Decreasing, dim, levels).map_err(HodgeError::from)?;
    Ok(NilpotentOrbit::new(
        shape.weight,
        to_i64_rows(&n).expect("unimodular conjugate stays integral"),
        f,
        format!("random-split({seed})"),
    )?)
}

/// Random split shape and conjugation, both determined by `seed`.
pub fn random_split_orbit(seed: u64) -> Result<NilpotentOrbit, CorpusError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = SplitShape::random(&mut rng);
    random_split_orbit_with_shape(seed, &shape)
}

/// The orbit of `exp(cN)F` for the same `N`. For `c` off the real line the
/// limit Hodge structure of a split orbit is in general no longer split
/// over `R`.
pub fn twist_orbit(
    orbit: &NilpotentOrbit,
    c: &GScalar,
    label: impl Into<String>,
) -> Result<NilpotentOrbit, CorpusError> {
    let e = orbit.n().exp_at(c).expect("orbit monodromy is nilpotent");
    let mut levels = BTreeMap::new();
    for (&p, s) in orbit.hodge().levels() {
        levels.insert(p, s.image_under(&e).map_err(HodgeError::from)?);
    }
    let f =
        Filtration::new(Direction::Decreasing, orbit.rank(), levels).map_err(HodgeError::from)?;
    Ok(NilpotentOrbit::new(
        orbit.weight(),
        orbit.n_int().to_vec(),
        f,
        label,
    )?)
}

/// `random-split(seed)` moved by `exp(cN)` with `Im c != 0`, `c` drawn from
/// `seed`.
pub fn twisted_split_orbit(seed: u64) -> Result<NilpotentOrbit, CorpusError> {
    let base = random_split_orbit(seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e15_7ed0);
    let im = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let c = GScalar::from_parts(
        rng.gen_range(-2..=2),
        rng.gen_range(1..=3),
        im,
        rng.gen_range(1..=3),
    );
    twist_orbit(&base, &c, format!("twisted-split({seed})"))
}

/// Properties an example is expected to have.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub validates: bool,
    pub pure_graded: bool,
    pub r_split: Option<bool>,
    pub kernel_injective: bool,
}

impl Manifest {
    /// The manifest actually satisfied by `orbit`. `r_split` is `None` when
    /// the graded pieces are not pure.
    pub fn observe(orbit: &NilpotentOrbit) -> Manifest {
        let mhs = build_limit_mhs(orbit).ok();
        Manifest {
            validates: validate_orbit(orbit).all_pass(),
            pure_graded: mhs.is_some(),
            r_split: mhs.as_ref().and_then(|m| is_r_split(m).ok()),
            kernel_injective: check_kernel_injectivity(orbit),
        }
    }
}

/// A named built-in orbit with its expected properties.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecipe {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub manifest: Manifest,
}

impl OrbitRecipe {
    pub fn build(&self) -> Result<NilpotentOrbit, CorpusError> {
        recipe(&self.name)
    }
}

/// The fixed catalogue of named examples with their manifests.
pub fn catalogue() -> Vec<OrbitRecipe> {
    let entry = |name: &str, params: &[(&str, &str)], m: Manifest| OrbitRecipe {
        name: name.to_string(),
        parameters: params
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        manifest: m,
    };
    vec![
        entry(
            "split-rank2",
            &[("rank", "2"), ("weight", "-1")],
            Manifest {
                validates: true,
                pure_graded: true,
                r_split: Some(true),
                kernel_injective: true,
            },
        ),
        entry(
            "twisted-rank4",
            &[("rank", "4"), ("weight", "-1")],
            Manifest {
                validates: true,
                pure_graded: false,
                r_split: None,
                kernel_injective: true,
            },
        ),
        entry(
            "impure-rank1",
            &[("rank", "1"), ("weight", "-1")],
            Manifest {
                validates: true,
                pure_graded: false,
                r_split: None,
                kernel_injective: true,
            },
        ),
        entry(
            "jordan(3,-1,0)",
            &[("size", "3"), ("weight", "-1"), ("hodge_shift", "0")],
            Manifest {
                validates: true,
                pure_graded: true,
                r_split: Some(true),
                kernel_injective: true,
            },
        ),
        entry(
            "jordan(2,-2,0)",
            &[("size", "2"), ("weight", "-2"), ("hodge_shift", "0")],
            Manifest {
                validates: true,
                pure_graded: true,
                r_split: Some(true),
                kernel_injective: true,
            },
        ),
        entry(
            "split-rank2+split-rank2",
            &[("rank", "4"), ("weight", "-1")],
            Manifest {
                validates: true,
                pure_graded: true,
                r_split: Some(true),
                kernel_injective: true,
            },
        ),
        entry(
            "random-split(7)",
            &[("seed", "7")],
            Manifest {
                validates: true,
                pure_graded: true,
                r_split: Some(true),
                kernel_injective: true,
            },
        ),
        entry(
            "twisted-split(4)",
            &[("seed", "4")],
            Manifest {
                validates: true,
                pure_graded: true,
                r_split: Some(false),
                kernel_injective: true,
            },
        ),
    ]
}

/// Builds an orbit from its name. Accepted forms: `split-rank2`, `twisted-rank4`,
/// `impure-rank1`, `jordan(size,w,shift)`, `random-split(seed)`,
/// `twisted-split(seed)`, and
/// `+`-separated direct sums of these.
pub fn recipe(name: &str) -> Result<NilpotentOrbit, CorpusError> {
    let name = name.trim();
    if name.contains('+') {
        let parts = name.split('+').map(recipe).collect::<Result<Vec<_>, _>>()?;
        return direct_sum(&parts);
    }
    let unknown = || CorpusError::UnknownRecipe(name.to_string());
    match name {
        "split-rank2" => return Ok(split_rank_two()),
        "twisted-rank4" => return Ok(twisted_rank_four()),
        "impure-rank1" => return Ok(impure_rank_one()),
        _ => {}
    }
    let (head, args) = name
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(unknown)?;
    let args: Vec<&str> = args.split(',').map(str::trim).collect();
    match (head.trim(), args.as_slice()) {
        ("jordan", [size, w, shift]) => {
            let size = size.parse().map_err(|_| unknown())?;
            let w = w.parse().map_err(|_| unknown())?;
            let shift = shift.parse().map_err(|_| unknown())?;
            jordan_orbit(size, w, shift)
        }
        ("random-split", [seed]) => random_split_orbit(seed.parse().map_err(|_| unknown())?),
        ("twisted-split", [seed]) => twisted_split_orbit(seed.parse().map_err(|_| unknown())?),
        _ => Err(unknown()),
    }
}

/// Names of the built-in examples, for help texts.
pub fn recipe_names() -> Vec<&'static str> {
    vec![
        "split-rank2",
        "twisted-rank4",
        "impure-rank1",
        "jordan(size,w,shift)",
        "random-split(seed)",
        "twisted-split(seed)",
        "<name>+<name>",
    ]
}
