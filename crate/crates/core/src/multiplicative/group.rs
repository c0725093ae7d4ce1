//! Finite groups, the nerve face maps and normalized group cochains.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle::CircleValue;
use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Structure("empty group".into()));
        }
        if names.len() != n {
            return Err(Error::Structure(format!("{} names for {} elements", names.len(), n)));
        }
        if let Some((i, row)) = table.iter().enumerate().find(|(_, r)| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Structure(format!("row {i} of the table is malformed: {row:?}")));
        }
        let identity =
            (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)).ok_or_else(|| Error::Structure("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::Structure(format!("element {} has no inverse", names[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Structure(format!("not associative at ({}, {}, {})", names[a], names[b], names[c])));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table, identity, inverse })
    }

    /// `ℤ/n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(names, table).expect("cyclic table is a group")
    }

    /// Direct product; element `(a, b)` has index `a·|H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, n) = (g.order(), h.order());
        let names = (0..m * n).map(|i| format!("({},{})", g.names[i / n], h.names[i % n])).collect();
        let table = (0..m * n).map(|x| (0..m * n).map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n)).collect()).collect();
        FiniteGroup::from_table(names, table).expect("product of groups is a group")
    }

    pub fn klein() -> Self {
        FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
    }

    /// Dihedral group of order `2n`; `r^i s^j` has index `i + n·j`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 2, "dihedral group needs n >= 2");
        let names = (0..2 * n)
            .map(|x| match (x % n, x / n) {
                (0, 0) => "e".to_string(),
                (i, 0) => format!("r{i}"),
                (0, _) => "s".to_string(),
                (i, _) => format!("r{i}s"),
            })
            .collect();
        // r^i s^j · r^k s^l = r^{i + (-1)^j k} s^{j + l}
        let table = (0..2 * n)
            .map(|x| {
                (0..2 * n)
                    .map(|y| {
                        let (i, j, k, l) = (x % n, x / n, y % n, y / n);
                        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                        rot + n * ((j + l) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(names, table).expect("dihedral table is a group")
    }

    /// The symmetric group on three letters, as the dihedral group of order 6.
    pub fn symmetric3() -> Self {
        FiniteGroup::dihedral(3)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.commute(a, b)))
    }

    /// All tuples of length `q`, last coordinate fastest.
    pub fn tuples(&self, q: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.order();
        (0..n.pow(q as u32)).map(move |mut idx| {
            let mut t = vec![0; q];
            for slot in t.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            t
        })
    }
}

/// The face map `d_i : Gⁿ → Gⁿ⁻¹` of the nerve: `d_0` drops the first
/// entry, `d_n` drops the last, and `d_i` multiplies entries `i` and `i+1`.
pub fn face_map(g: &FiniteGroup, i: usize, tuple: &[usize]) -> Result<Vec<usize>> {
    let n = tuple.len();
    if i > n {
        return Err(Error::Parameter(format!("face index {i} out of range for a tuple of length {n}")));
    }
    if n == 0 {
        return Err(Error::Parameter("no faces of the empty tuple".into()));
    }
    Ok(if i == 0 {
        tuple[1..].to_vec()
    } else if i == n {
        tuple[..n - 1].to_vec()
    } else {
        let mut out = tuple[..i - 1].to_vec();
        out.push(g.mul(tuple[i - 1], tuple[i]));
        out.extend_from_slice(&tuple[i + 1..]);
        out
    })
}

fn reduce(r: Rational64) -> Rational64 {
    r - r.floor()
}

/// A normalized `U(1)`-valued cochain `Gᵠ → ℚ/ℤ` with exact values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCochain {
    group: Arc<FiniteGroup>,
    degree: usize,
    values: Vec<Rational64>,
}

/// A tuple where a group identity fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleViolation {
    pub tuple: Vec<String>,
    pub defect: CircleValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupCocycleReport {
    pub passed: bool,
    pub checked: usize,
    pub violations: Vec<CocycleViolation>,
}

/// How many violating tuples a report keeps.
pub const MAX_REPORTED: usize = 8;

impl GroupCochain {
    pub fn trivial(group: Arc<FiniteGroup>, degree: usize) -> Self {
        let len = group.order().pow(degree as u32);
        GroupCochain { group, degree, values: vec![Rational64::zero(); len] }
    }

    /// Tabulate `f`; errors if the result is not normalized.
    pub fn from_fn(group: Arc<FiniteGroup>, degree: usize, f: impl Fn(&[usize]) -> Rational64) -> Result<Self> {
        let values = group.tuples(degree).map(|t| reduce(f(&t))).collect();
        let c = GroupCochain { group, degree, values };
        c.check_normalized()?;
        Ok(c)
    }

    /// Values listed in [`FiniteGroup::tuples`] order.
    pub fn tabulated(group: Arc<FiniteGroup>, degree: usize, values: Vec<Rational64>) -> Result<Self> {
        let len = group.order().pow(degree as u32);
        if values.len() != len {
            return Err(Error::Structure(format!("expected {len} values, got {}", values.len())));
        }
        let values = values.into_iter().map(reduce).collect();
        let c = GroupCochain { group, degree, values };
        c.check_normalized()?;
        Ok(c)
    }

    /// The standard generator family on `ℤ/n`: `k·a·[b + c ≥ n] / n`.
    pub fn cyclic(n: usize, k: i64) -> Self {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let n64 = n as i64;
        GroupCochain::from_fn(g, 3, |t| {
            let carry = if t[1] + t[2] >= n { 1 } else { 0 };
            Rational64::new(k * t[0] as i64 * carry, n64)
        })
        .expect("cyclic cocycle is normalized")
    }

    /// A random normalized cochain with values in `(1/den)ℤ`.
    pub fn random(group: Arc<FiniteGroup>, degree: usize, den: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = group.identity();
        let values =
            group.tuples(degree).map(|t| if t.contains(&e) { Rational64::zero() } else { Rational64::new(rng.gen_range(0..den), den) }).collect();
        GroupCochain { group, degree, values }
    }

    fn check_normalized(&self) -> Result<()> {
        let e = self.group.identity();
        for (t, v) in self.group.tuples(self.degree).zip(&self.values) {
            if t.contains(&e) && !v.is_zero() {
                return Err(Error::Precondition(format!("cochain not normalized at {}", self.describe(&t))));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.group.order() + x)
    }

    pub fn value(&self, tuple: &[usize]) -> Rational64 {
        debug_assert_eq!(tuple.len(), self.degree);
        self.values[self.index(tuple)]
    }

    /// Overwrite one value. Normalization is enforced.
    pub fn set(&mut self, tuple: &[usize], value: Rational64) -> Result<()> {
        if tuple.len() != self.degree {
            return Err(Error::Parameter("tuple length does not match the degree".into()));
        }
        if tuple.contains(&self.group.identity()) && !reduce(value).is_zero() {
            return Err(Error::Precondition("cochain must stay normalized".into()));
        }
        let i = self.index(tuple);
        self.values[i] = reduce(value);
        Ok(())
    }

    pub fn add(&self, other: &GroupCochain) -> Result<GroupCochain> {
        if self.degree != other.degree || self.group != other.group {
            return Err(Error::Structure("cochains live on different groups or degrees".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| reduce(a + b)).collect();
        Ok(GroupCochain { group: self.group.clone(), degree: self.degree, values })
    }

    pub fn scale(&self, k: i64) -> GroupCochain {
        let values = self.values.iter().map(|a| reduce(a * Rational64::from_integer(k))).collect();
        GroupCochain { group: self.group.clone(), degree: self.degree, values }
    }

    /// `(δβ)(t) = Σ_i (-1)^i β(d_i t)`.
    pub fn coboundary(&self) -> GroupCochain {
        let q = self.degree + 1;
        let values = self
            .group
            .tuples(q)
            .map(|t| {
                let s: Rational64 = (0..=q)
                    .map(|i| {
                        let v = self.value(&face_map(&self.group, i, &t).expect("face in range"));
                        if i % 2 == 0 {
                            v
                        } else {
                            -v
                        }
                    })
                    .sum();
                reduce(s)
            })
            .collect();
        GroupCochain { group: self.group.clone(), degree: q, values }
    }

    fn describe(&self, t: &[usize]) -> String {
        let names: Vec<&str> = t.iter().map(|&x| self.group.name(x)).collect();
        format!("({})", names.join(", "))
    }

    /// Exhaustive check of `δω = 0`, keeping the first violating tuples.
    pub fn cocycle_report(&self) -> GroupCocycleReport {
        let d = self.coboundary();
        let mut violations = Vec::new();
        let mut bad = 0;
        for (t, v) in self.group.tuples(d.degree).zip(&d.values) {
            if !v.is_zero() {
                bad += 1;
                if violations.len() < MAX_REPORTED {
                    violations.push(CocycleViolation {
                        tuple: t.iter().map(|&x| self.group.name(x).to_string()).collect(),
                        defect: CircleValue::from_rational(*v),
                    });
                }
            }
        }
        GroupCocycleReport { passed: bad == 0, checked: d.values.len(), violations }
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().values.iter().all(|v| v.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn groups() -> Vec<FiniteGroup> {
        vec![
            FiniteGroup::cyclic(1),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(4),
            FiniteGroup::klein(),
            FiniteGroup::symmetric3(),
        ]
    }

    #[test]
    fn face_maps_on_pairs() {
        let g = FiniteGroup::symmetric3();
        let (a, b) = (1, 3);
        assert_eq!(face_map(&g, 0, &[a, b]).unwrap(), vec![b]);
        assert_eq!(face_map(&g, 1, &[a, b]).unwrap(), vec![g.mul(a, b)]);
        assert_eq!(face_map(&g, 2, &[a, b]).unwrap(), vec![a]);
        assert_eq!(face_map(&g, 1, &[a, g.inv(a)]).unwrap(), vec![g.identity()]);
        assert!(matches!(face_map(&g, 3, &[a, b]), Err(Error::Parameter(_))));
    }

    #[test]
    fn simplicial_identities_hold() {
        for g in groups().into_iter().filter(|g| g.order() <= 4) {
            for n in 2..=4 {
                for t in g.tuples(n) {
                    for j in 1..=n {
                        for i in 0..j {
                            let lhs = face_map(&g, i, &face_map(&g, j, &t).unwrap()).unwrap();
                            let rhs = face_map(&g, j - 1, &face_map(&g, i, &t).unwrap()).unwrap();
                            assert_eq!(lhs, rhs, "d_{i} d_{j} on {t:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dihedral_is_nonabelian() {
        let d = FiniteGroup::dihedral(4);
        assert_eq!(d.order(), 8);
        assert!(!d.is_abelian());
        assert!(FiniteGroup::klein().is_abelian());
    }

    #[test]
    fn bad_tables_are_rejected() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(names, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn cyclic_cocycles_close() {
        for n in 1..=6 {
            for k in 0..n as i64 {
                let report = GroupCochain::cyclic(n, k).cocycle_report();
                assert!(report.passed, "n={n} k={k}: {:?}", report.violations);
                assert_eq!(report.checked, n.pow(4));
            }
        }
    }

    #[test]
    fn perturbed_cocycle_names_a_tuple() {
        let mut w = GroupCochain::cyclic(3, 1);
        let v = w.value(&[1, 2, 2]);
        w.set(&[1, 2, 2], v + Rational64::new(1, 3)).unwrap();
        let report = w.cocycle_report();
        assert!(!report.passed);
        assert_eq!(report.violations[0].tuple.len(), 4);
    }

    #[test]
    fn normalization_is_enforced() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        assert!(GroupCochain::from_fn(g.clone(), 2, |_| Rational64::new(1, 2)).is_err());
        let mut b = GroupCochain::trivial(g, 2);
        assert!(b.set(&[0, 1], Rational64::new(1, 2)).is_err());
    }

    proptest! {
        #[test]
        fn coboundaries_are_cocycles(seed in any::<u64>(), which in 0usize..6, den in 1i64..7) {
            let g = Arc::new(groups().swap_remove(which));
            let beta = GroupCochain::random(g, 2, den, seed);
            prop_assert!(beta.coboundary().is_cocycle());
        }
    }
}
