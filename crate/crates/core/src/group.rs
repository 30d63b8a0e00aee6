//! Finite groups given by multiplication tables, and the bundled library.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::is_prime;

/// `table[i][j]` is the index of `g_i g_j`; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub name: String,
    pub order: usize,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

pub const BUNDLED: &str = "Cn (1 <= n <= 32), S3, Dn (2 <= n <= 10), CpxCq(p,q) (primes with q | p-1)";

impl GroupTable {
    pub fn new(name: impl Into<String>, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let g = GroupTable { name: name.into(), order: elements.len(), elements, table };
        g.validate()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: GroupTable = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let bad = |axiom, detail: String| Err(Error::InvalidGroup { axiom, detail });
        if n == 0 {
            return bad("order", "order must be positive".into());
        }
        if self.elements.len() != n || self.table.len() != n {
            return bad(
                "order",
                format!("order {n} but {} labels and {} table rows", self.elements.len(), self.table.len()),
            );
        }
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != n {
                return bad("closure", format!("row {i} has {} entries", row.len()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return bad("closure", format!("entry {x} in row {i} is out of range"));
            }
        }
        for i in 0..n {
            if self.table[0][i] != i || self.table[i][0] != i {
                return bad("identity", format!("element 0 is not a two-sided identity at index {i}"));
            }
        }
        for i in 0..n {
            if !(0..n).any(|j| self.table[i][j] == 0 && self.table[j][i] == 0) {
                return bad("inverses", format!("element {i} has no two-sided inverse"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return bad("associativity", format!("({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.table[a][b] == 0).expect("validated table")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|l| l == label)
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// Small generating set chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for g in 1..self.order {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        (0..self.order).all(|g| {
            let gi = self.inverse(g);
            sub.iter().all(|&h| set.contains(&self.mul(self.mul(g, h), gi)))
        })
    }

    /// Largest p-perfect subgroup: iterate `K <- <[K,K], K^p>` to a fixed point.
    pub fn max_p_perfect_subgroup(&self, p: u32) -> Vec<usize> {
        let mut k: Vec<usize> = (0..self.order).collect();
        loop {
            let mut gens = BTreeSet::new();
            for &x in &k {
                for &y in &k {
                    let c = self.mul(self.mul(x, y), self.mul(self.inverse(x), self.inverse(y)));
                    gens.insert(c);
                }
                let mut xp = 0;
                for _ in 0..p {
                    xp = self.mul(xp, x);
                }
                gens.insert(xp);
            }
            let gens: Vec<usize> = gens.into_iter().collect();
            let next = self.generated(&gens);
            if next == k {
                return k;
            }
            k = next;
        }
    }

    /// Quotient by a normal subgroup, with the coset index of every element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(GroupTable, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(Error::InvalidInput("subgroup is not normal".into()));
        }
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset[g] == usize::MAX {
                let c = reps.len();
                reps.push(g);
                for &h in normal {
                    coset[self.mul(g, h)] = c;
                }
            }
        }
        let m = reps.len();
        let table = (0..m).map(|a| (0..m).map(|b| coset[self.mul(reps[a], reps[b])]).collect()).collect();
        let elements = reps.iter().map(|&r| format!("{}N", self.elements[r])).collect();
        let q = GroupTable::new(format!("{}/N", self.name), elements, table)?;
        Ok((q, coset))
    }

    pub fn is_p_group(&self, p: u32) -> bool {
        let mut n = self.order;
        while n % p as usize == 0 {
            n /= p as usize;
        }
        n == 1
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::InvalidInput(format!("C{n}: cyclic groups need 1 <= n <= 32")));
        }
        let elements = (0..n).map(power_label("g")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(format!("C{n}"), elements, table)
    }

    /// S3 as permutations of {1,2,3}, composed right to left.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let labels = ["()", "(12)", "(13)", "(23)", "(123)", "(132)"];
        let idx = |q: [usize; 3]| perms.iter().position(|&x| x == q).unwrap();
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let (s, t) = (perms[a], perms[b]);
                        idx([s[t[0]], s[t[1]], s[t[2]]])
                    })
                    .collect()
            })
            .collect();
        GroupTable::new("S3", labels.iter().map(|s| s.to_string()).collect(), table).expect("S3 table")
    }

    /// Dihedral group of order 2n: elements `r^i s^j` at index `i + n j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if !(2..=10).contains(&n) {
            return Err(Error::InvalidInput(format!("D{n}: dihedral groups need 2 <= n <= 10")));
        }
        let mut elements = Vec::new();
        for j in 0..2 {
            for i in 0..n {
                let r = power_label("r")(i);
                elements.push(match (i, j) {
                    (_, 0) => r,
                    (0, _) => "s".to_string(),
                    _ => format!("{r}s"),
                });
            }
        }
        let table = (0..2 * n)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (c, d) = (y % n, y / n);
                        let i = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                        i + n * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(format!("D{n}"), elements, table)
    }

    /// `C_p ⋊ C_q` with `b a b^-1 = a^r`, `r` the least residue of order q mod p.
    pub fn semidirect(p: usize, q: usize) -> Result<Self> {
        if !is_prime(p as u32) || !is_prime(q as u32) || (p - 1) % q != 0 {
            return Err(Error::InvalidInput(format!("CpxCq({p},{q}) needs primes with q | p-1")));
        }
        let r = (2..p)
            .find(|&r| {
                let mut x = 1;
                for k in 1..=q {
                    x = x * r % p;
                    if x == 1 {
                        return k == q;
                    }
                }
                false
            })
            .ok_or_else(|| Error::InvalidInput("no residue of the required order".into()))?;
        let rpow: Vec<usize> = (0..q).scan(1, |x, _| {
            let v = *x;
            *x = *x * r % p;
            Some(v)
        })
        .collect();
        let mut elements = Vec::new();
        for j in 0..q {
            for i in 0..p {
                let a = power_label("a")(i);
                let b = power_label("b")(j);
                elements.push(match (i, j) {
                    (_, 0) => a,
                    (0, _) => b,
                    _ => format!("{a}{b}"),
                });
            }
        }
        let table = (0..p * q)
            .map(|x| {
                let (i, j) = (x % p, x / p);
                (0..p * q)
                    .map(|y| {
                        let (k, l) = (y % p, y / p);
                        (i + rpow[j] * k) % p + p * ((j + l) % q)
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(format!("CpxCq({p},{q})"), elements, table)
    }

    /// Resolve a bundled group name.
    pub fn from_name(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup { name: name.to_string(), bundled: BUNDLED.to_string() };
        let s = name.trim();
        if s == "S3" {
            return Ok(Self::symmetric3());
        }
        if let Some(args) = s.strip_prefix("CpxCq(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if parts.len() == 2 {
                if let (Ok(p), Ok(q)) = (parts[0].parse(), parts[1].parse()) {
                    return Self::semidirect(p, q);
                }
            }
            return Err(unknown());
        }
        if let Some(n) = s.strip_prefix('C').and_then(|r| r.parse().ok()) {
            return Self::cyclic(n);
        }
        if let Some(n) = s.strip_prefix('D').and_then(|r| r.parse().ok()) {
            return Self::dihedral(n);
        }
        Err(unknown())
    }
}

fn power_label(sym: &'static str) -> impl Fn(usize) -> String {
    move |i| match i {
        0 => "1".to_string(),
        1 => sym.to_string(),
        _ => format!("{sym}^{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_orders() {
        assert_eq!(GroupTable::symmetric3().order, 6);
        assert_eq!(GroupTable::from_name("C9").unwrap().order, 9);
        assert_eq!(GroupTable::from_name("D4").unwrap().order, 8);
        let g = GroupTable::from_name("CpxCq(7,3)").unwrap();
        assert_eq!(g.order, 21);
        assert!(!g.is_abelian());
        assert!(matches!(GroupTable::from_name("Q8"), Err(Error::UnknownGroup { .. })));
        assert!(GroupTable::from_name("C33").is_err());
    }

    #[test]
    fn semidirect_relation_uses_r_two() {
        let g = GroupTable::semidirect(7, 3).unwrap();
        let a = g.index_of("a").unwrap();
        let b = g.index_of("b").unwrap();
        let bab = g.mul(g.mul(b, a), g.inverse(b));
        assert_eq!(g.elements[bab], "a^2");
        assert_eq!(g.element_order(a), 7);
        assert_eq!(g.element_order(b), 3);
    }

    #[test]
    fn s3_structure() {
        let g = GroupTable::symmetric3();
        let t = g.index_of("(12)").unwrap();
        let c = g.index_of("(123)").unwrap();
        assert_eq!(g.element_order(t), 2);
        assert_eq!(g.element_order(c), 3);
        // (12)(23) = (123) under right-to-left composition.
        assert_eq!(g.mul(t, g.index_of("(23)").unwrap()), c);
        assert_eq!(g.max_p_perfect_subgroup(3).len(), 6);
        assert_eq!(g.max_p_perfect_subgroup(2).len(), 3);
    }

    #[test]
    fn p_perfect_subgroups() {
        let g = GroupTable::semidirect(7, 3).unwrap();
        assert_eq!(g.max_p_perfect_subgroup(7).len(), 21);
        assert_eq!(g.max_p_perfect_subgroup(3).len(), 7);
        assert_eq!(GroupTable::cyclic(9).unwrap().max_p_perfect_subgroup(3), vec![0]);
    }

    #[test]
    fn quotient_by_normal_subgroup() {
        let g = GroupTable::symmetric3();
        let a3 = g.generated(&[g.index_of("(123)").unwrap()]);
        let (q, coset) = g.quotient(&a3).unwrap();
        assert_eq!(q.order, 2);
        assert_eq!(coset[0], 0);
        assert!(g.quotient(&g.generated(&[1])).is_err());
    }

    #[test]
    fn validation_names_failing_axiom() {
        let bad = r#"{"name":"bad","order":2,"elements":["e","x"],"table":[[0,1],[1,1]]}"#;
        match GroupTable::from_json(bad) {
            Err(Error::InvalidGroup { axiom, .. }) => assert_eq!(axiom, "inverses"),
            other => panic!("unexpected {other:?}"),
        }
        let nonassoc = GroupTable {
            name: "x".into(),
            order: 3,
            elements: vec!["e".into(), "a".into(), "b".into()],
            table: vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]],
        };
        match nonassoc.validate() {
            Err(Error::InvalidGroup { axiom, .. }) => assert!(axiom == "associativity" || axiom == "inverses"),
            other => panic!("unexpected {other:?}"),
        }
        let good = serde_json::to_string(&GroupTable::cyclic(4).unwrap()).unwrap();
        assert_eq!(GroupTable::from_json(&good).unwrap().order, 4);
    }
}
