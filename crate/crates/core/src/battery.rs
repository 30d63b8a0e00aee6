//! Seeded families of algebra maps for comparing the two epimorphism
//! notions, and random admissible free-product inputs.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraMap};
use crate::derived::{is_homological_epi, EpiVerdict};
use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use crate::freeprod::{certify_free, free_product, HomotopyEpiVerdict, TruncatedFreeProduct, is_homotopy_epi};
use crate::group::GroupTable;

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub map: AlgebraMap,
}

fn instance(name: impl Into<String>, map: AlgebraMap) -> Instance {
    Instance { name: name.into(), map }
}

fn group_algebra(name: &str, p: u32) -> Result<Arc<Algebra>> {
    Ok(Arc::new(Algebra::group_algebra(&GroupTable::from_name(name)?, p)?))
}

/// Algebras of dimension at most 6 over `F_p`.
pub fn small_algebras(p: u32) -> Result<Vec<Arc<Algebra>>> {
    let mut out = Vec::new();
    for g in ["C2", "C3", "C4", "C5", "C6", "S3", "D2"] {
        out.push(group_algebra(g, p)?);
    }
    for k in 2..=6 {
        out.push(Arc::new(Algebra::truncated_polynomial(p, k)?));
    }
    out.push(Arc::new(Algebra::upper_triangular(p, 2)?));
    out.push(Arc::new(Algebra::matrix_algebra(p, 2)?));
    let k = Algebra::ground(p);
    let d2 = Algebra::truncated_polynomial(p, 2)?;
    out.push(Arc::new(k.product(&k)?));
    out.push(Arc::new(d2.product(&k)?));
    out.push(Arc::new(d2.tensor(&d2)?));
    out.push(Arc::new(d2.tensor(&Algebra::truncated_polynomial(p, 3)?)?));
    Ok(out)
}

fn random_invertible(p: u32, n: usize, rng: &mut ChaCha8Rng) -> FpMatrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let m = FpMatrix::from_data(p, n, n, data);
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn random_unit(a: &Algebra, rng: &mut ChaCha8Rng) -> (Vec<u32>, Vec<u32>) {
    loop {
        let x: Vec<u32> = (0..a.dim()).map(|_| rng.gen_range(0..a.p())).collect();
        if let Some(inv) = a.inverse(&x) {
            return (x, inv);
        }
    }
}

/// `A -> A'` for the same algebra on a random basis.
pub fn basis_change(a: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> Result<AlgebraMap> {
    let t = random_invertible(a.p(), a.dim(), rng);
    let b = Arc::new(a.change_basis(&t)?);
    let ti = t.inverse().expect("invertible");
    AlgebraMap::new(a.clone(), b, ti)
}

/// Inner automorphism `x -> u x u^-1` for a random unit `u`.
pub fn conjugation(a: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> Result<AlgebraMap> {
    let (u, ui) = random_unit(a, rng);
    let images: Vec<Vec<u32>> = (0..a.dim()).map(|i| a.mul(&a.mul(&u, &a.basis(i)), &ui)).collect();
    AlgebraMap::from_images(a.clone(), a.clone(), &images)
}

pub fn from_ground(b: &Arc<Algebra>) -> Result<AlgebraMap> {
    let k = Arc::new(Algebra::ground(b.p()));
    AlgebraMap::from_images(k, b.clone(), &[b.unit().to_vec()])
}

/// `a -> a ⊗ 1` into `A ⊗ K`.
pub fn into_tensor(a: &Arc<Algebra>, k: &Algebra) -> Result<AlgebraMap> {
    let t = Arc::new(a.tensor(k)?);
    let images: Vec<Vec<u32>> = (0..a.dim())
        .map(|i| {
            let mut v = vec![0; t.dim()];
            for (j, &c) in k.unit().iter().enumerate() {
                v[i * k.dim() + j] = c;
            }
            v
        })
        .collect();
    AlgebraMap::from_images(a.clone(), t, &images)
}

/// `a -> (a, a)` into `A × A`.
pub fn diagonal(a: &Arc<Algebra>) -> Result<AlgebraMap> {
    let d = Arc::new(a.product(a)?);
    let images: Vec<Vec<u32>> = (0..a.dim())
        .map(|i| {
            let mut v = a.basis(i);
            v.extend(a.basis(i));
            v
        })
        .collect();
    AlgebraMap::from_images(a.clone(), d, &images)
}

/// Projection `A × B -> A`.
pub fn projection(a: &Algebra, b: &Algebra) -> Result<AlgebraMap> {
    let prod = Arc::new(a.product(b)?);
    let images: Vec<Vec<u32>> = (0..prod.dim())
        .map(|i| if i < a.dim() { a.basis(i) } else { a.zero() })
        .collect();
    AlgebraMap::from_images(prod, Arc::new(a.clone()), &images)
}

/// `F_p[H] -> F_p[G]` for the cyclic subgroup generated by `g`.
pub fn cyclic_subgroup(gname: &str, gen: &str, p: u32) -> Result<AlgebraMap> {
    let g = GroupTable::from_name(gname)?;
    let big = Arc::new(Algebra::group_algebra(&g, p)?);
    let x = g.index_of(gen).ok_or_else(|| Error::InvalidInput(format!("{gen} is not in {gname}")))?;
    let n = g.element_order(x);
    let h = Arc::new(Algebra::group_algebra(&GroupTable::cyclic(n)?, p)?);
    let mut images = Vec::with_capacity(n);
    let mut cur = 0;
    for _ in 0..n {
        images.push(big.basis(cur));
        cur = g.mul(cur, x);
    }
    AlgebraMap::from_images(h, big, &images)
}

/// `F_p[x]/x^m -> F_p[x]/x^n` with `x -> x^s`.
pub fn power_map(p: u32, m: usize, n: usize, s: usize) -> Result<AlgebraMap> {
    let a = Arc::new(Algebra::truncated_polynomial(p, m)?);
    let b = Arc::new(Algebra::truncated_polynomial(p, n)?);
    let images: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut v = vec![0; n];
            if i * s < n {
                v[i * s] = 1;
            }
            v
        })
        .collect();
    AlgebraMap::from_images(a, b, &images)
}

/// The comparison battery: isomorphisms (expected yes), inclusions and
/// extensions of scalars (expected no), plus inadmissible surjections.
pub fn epi_battery(seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        let algebras = small_algebras(p)?;
        for a in &algebras {
            let name = a.name().to_string();
            out.push(instance(format!("id {name}"), AlgebraMap::identity(a.clone())));
            out.push(instance(format!("basis change {name}"), basis_change(a, &mut rng)?));
            out.push(instance(format!("conjugation {name}"), conjugation(a, &mut rng)?));
            if a.dim() >= 2 {
                out.push(instance(format!("F{p} -> {name}"), from_ground(a)?));
            }
            if a.dim() <= 3 {
                out.push(instance(format!("diagonal {name}"), diagonal(a)?));
                out.push(instance(format!("{name} -> {name} ⊗ F{p}[y]/y^2"), into_tensor(a, &Algebra::truncated_polynomial(p, 2)?)?));
            }
            if a.dim() <= 6 && a.augmentation().is_some() && a.dim() >= 2 {
                out.push(instance(format!("augmentation {name}"), AlgebraMap::augmentation(a.clone())?));
            }
        }
        for (g, x) in [("S3", "(12)"), ("S3", "(123)"), ("C4", "g^2"), ("C6", "g^2"), ("C6", "g^3"), ("D2", "s"), ("D3", "r")] {
            out.push(instance(format!("{x} in {g} over F{p}"), cyclic_subgroup(g, x, p)?));
        }
        out.push(instance(format!("x -> x^2, F{p}[x]/x^2 -> F{p}[x]/x^4"), power_map(p, 2, 4, 2)?));
        out.push(instance(format!("x -> x^3, F{p}[x]/x^2 -> F{p}[x]/x^6"), power_map(p, 2, 6, 3)?));
        out.push(instance(format!("x -> x, F{p}[x]/x^3 -> F{p}[x]/x^2"), power_map(p, 3, 2, 1)?));
        let k = Algebra::ground(p);
        out.push(instance(format!("F{p} x F{p} -> F{p}"), projection(&k, &k)?));
        let t2 = Algebra::upper_triangular(p, 2)?;
        out.push(instance(format!("T2(F{p}) x F{p} -> T2"), projection(&t2, &k)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryRecord {
    pub name: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub homotopy: HomotopyEpiVerdict,
    pub homological: Option<EpiVerdict>,
    /// Whether the `Ω^L` and multiplication-cone readings agreed.
    pub omega_matches_cone: bool,
    /// Both verdicts definite and equal; `None` if either is indefinite.
    pub agree: Option<bool>,
    pub detail: Option<String>,
}

impl BatteryRecord {
    pub fn admissible(&self) -> bool {
        self.homotopy.is_yes().is_some()
    }
}

pub fn run_instance(inst: &Instance, max_word: usize, degree: usize) -> Result<BatteryRecord> {
    let homotopy = is_homotopy_epi(&inst.map, max_word)?;
    let (homological, omega_matches_cone, detail) = match is_homological_epi(&inst.map, degree) {
        Ok(r) => (Some(r.verdict), true, None),
        Err(Error::Internal(msg)) => (None, false, Some(msg)),
        Err(e) => (None, true, Some(e.to_string())),
    };
    let agree = match (homotopy.is_yes(), homological) {
        (Some(h), Some(v)) => Some(h == v.is_yes()),
        _ => None,
    };
    Ok(BatteryRecord {
        name: inst.name.clone(),
        source_dim: inst.map.source.dim(),
        target_dim: inst.map.target.dim(),
        homotopy,
        homological,
        omega_matches_cone,
        agree,
        detail,
    })
}

pub fn run_battery(instances: &[Instance], max_word: usize, degree: usize) -> Result<Vec<BatteryRecord>> {
    instances.iter().map(|i| run_instance(i, max_word, degree)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BatterySummary {
    pub instances: usize,
    pub admissible: usize,
    pub yes: usize,
    pub no: usize,
    pub disagreements: Vec<String>,
    pub omega_cone_mismatches: Vec<String>,
}

pub fn summarize(records: &[BatteryRecord]) -> BatterySummary {
    let definite: Vec<&BatteryRecord> = records.iter().filter(|r| r.agree.is_some()).collect();
    BatterySummary {
        instances: records.len(),
        admissible: records.iter().filter(|r| r.admissible()).count(),
        yes: definite.iter().filter(|r| r.homotopy.is_yes() == Some(true)).count(),
        no: definite.iter().filter(|r| r.homotopy.is_yes() == Some(false)).count(),
        disagreements: records.iter().filter(|r| r.agree == Some(false)).map(|r| r.name.clone()).collect(),
        omega_cone_mismatches: records.iter().filter(|r| !r.omega_matches_cone).map(|r| r.name.clone()).collect(),
    }
}

/// Admissible `A -> B`, `A -> C` pairs with a word bound.
pub struct FreeProductInstance {
    pub name: String,
    pub product: TruncatedFreeProduct,
}

/// `f` with its source replaced by the equal algebra `a`.
fn rebase(f: AlgebraMap, a: &Arc<Algebra>) -> Result<AlgebraMap> {
    if *f.source != **a {
        return Err(Error::InvalidInput("map source differs from the base".into()));
    }
    AlgebraMap::new(a.clone(), f.target, f.matrix)
}

/// Maps out of `A` with free quotient, for several small bases `A`.
fn maps_under(a_name: &str, p: u32) -> Result<(Arc<Algebra>, Vec<AlgebraMap>)> {
    let mut maps = Vec::new();
    let a = match a_name {
        "k" => {
            let a = Arc::new(Algebra::ground(p));
            for b in small_algebras(p)? {
                maps.push(rebase(from_ground(&b)?, &a)?);
            }
            a
        }
        "C2" => {
            let f = cyclic_subgroup("S3", "(12)", p)?;
            let a = f.source.clone();
            maps.push(f);
            maps.push(rebase(cyclic_subgroup("C4", "g^2", p)?, &a)?);
            maps.push(rebase(cyclic_subgroup("C6", "g^3", p)?, &a)?);
            maps.push(rebase(cyclic_subgroup("D2", "s", p)?, &a)?);
            maps.push(AlgebraMap::identity(a.clone()));
            maps.push(diagonal(&a)?);
            maps.push(into_tensor(&a, &Algebra::truncated_polynomial(p, 2)?)?);
            maps.push(into_tensor(&a, &Algebra::truncated_polynomial(p, 3)?)?);
            a
        }
        "D" => {
            let f = power_map(p, 2, 4, 2)?;
            let a = f.source.clone();
            maps.push(f);
            maps.push(rebase(power_map(p, 2, 6, 3)?, &a)?);
            maps.push(AlgebraMap::identity(a.clone()));
            maps.push(diagonal(&a)?);
            maps.push(into_tensor(&a, &Algebra::truncated_polynomial(p, 3)?)?);
            maps.push(into_tensor(&a, &Algebra::group_algebra(&GroupTable::cyclic(2)?, p)?)?);
            a
        }
        "C3" => {
            let f = cyclic_subgroup("S3", "(123)", p)?;
            let a = f.source.clone();
            maps.push(f);
            maps.push(rebase(cyclic_subgroup("C6", "g^2", p)?, &a)?);
            maps.push(AlgebraMap::identity(a.clone()));
            maps.push(diagonal(&a)?);
            maps.push(into_tensor(&a, &Algebra::truncated_polynomial(p, 2)?)?);
            a
        }
        _ => return Err(Error::InvalidInput(format!("no maps under {a_name}"))),
    };
    Ok((a, maps))
}

/// Seeded admissible free-product inputs with dimensions at most 6. The
/// word bound is the largest `m <= 6` keeping at most `word_budget` words.
pub fn free_product_instances(seed: u64, count: usize, word_budget: usize) -> Result<Vec<FreeProductInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pools = Vec::new();
    for p in [2u32, 3, 5] {
        for base in ["k", "C2", "D", "C3"] {
            pools.push((format!("{base}/F{p}"), maps_under(base, p)?));
        }
    }
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count && guard < 50 * count {
        guard += 1;
        let (pname, (_, maps)) = &pools[rng.gen_range(0..pools.len())];
        let fb = &maps[rng.gen_range(0..maps.len())];
        let fc = &maps[rng.gen_range(0..maps.len())];
        let (Ok(cb), Ok(cc)) = (certify_free(fb, 0)?, certify_free(fc, 0)?) else { continue };
        let mut max_word = 6;
        while max_word > 2 {
            let total: usize = (1..=max_word)
                .map(|k| crate::freeprod::word_count(fb.target.dim(), cc.rank(), cb.rank(), k))
                .sum();
            if total <= word_budget {
                break;
            }
            max_word -= 1;
        }
        if let Ok(product) = free_product(fb, fc, max_word)? {
            let name = format!("{pname}: {} * {} (words <= {max_word})", fb.target.name(), fc.target.name());
            out.push(FreeProductInstance { name, product });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_large_and_deterministic() {
        let a = epi_battery(7).unwrap();
        let b = epi_battery(7).unwrap();
        assert!(a.len() >= 200);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| x.map.matrix == y.map.matrix));
    }

    #[test]
    fn small_instances_agree() {
        let p = 3;
        let c3 = group_algebra("C3", p).unwrap();
        let cases = [
            instance("id", AlgebraMap::identity(c3.clone())),
            instance("ground", from_ground(&c3).unwrap()),
            instance("diag", diagonal(&c3).unwrap()),
            instance("aug", AlgebraMap::augmentation(c3).unwrap()),
        ];
        let recs = run_battery(&cases, 6, 4).unwrap();
        assert_eq!(recs[0].agree, Some(true));
        assert_eq!(recs[1].agree, Some(true));
        assert_eq!(recs[2].agree, Some(true));
        assert!(!recs[3].admissible());
        assert!(recs.iter().all(|r| r.omega_matches_cone));
        assert_eq!(recs[3].homological, Some(EpiVerdict::NoAtDegree { degree: 1 }));
    }

    #[test]
    fn free_product_pool() {
        let inst = free_product_instances(11, 10, 300).unwrap();
        assert_eq!(inst.len(), 10);
    }
}
