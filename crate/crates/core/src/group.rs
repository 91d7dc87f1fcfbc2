//! Finite groups stored as explicit Cayley tables.
//!
//! Elements are dense indices `0..order` with the identity fixed at `0`.
//! Products are table lookups, so every group here is immutable after
//! construction and can be shared freely between threads.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::GroupError;

/// Global default for the largest table we are willing to build.
pub const DEFAULT_ORDER_CAP: usize = 2048;

/// Tables up to this order get the full `O(n^3)` associativity check;
/// larger ones are sampled with `10 n^2` random triples.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    label: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("label", &self.label).field("order", &self.order).finish()
    }
}

/// On-disk form of a group: `{"order": n, "table": [[...]], "label": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub label: String,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table and validates every
    /// group axiom (associativity is sampled above [`FULL_ASSOCIATIVITY_LIMIT`]).
    pub fn from_table(table: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::MalformedTable(format!("row {a} has length {} (expected {order})", row.len())));
            }
            for &x in row {
                if x >= order {
                    return Err(GroupError::ElementOutOfRange { index: x, order });
                }
                flat.push(x as u32);
            }
        }
        let group = Self::from_flat(order, flat, label.into())?;
        group.check_associative()?;
        Ok(group)
    }

    /// Latin-square and identity checks, then inverse extraction.
    /// Associativity is the caller's responsibility.
    pub(crate) fn from_flat(order: usize, table: Vec<u32>, label: String) -> Result<Self, GroupError> {
        debug_assert_eq!(table.len(), order * order);
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(GroupError::MalformedTable(format!("index 0 is not a two-sided identity at element {a}")));
            }
        }
        let mut seen = vec![0usize; order];
        for a in 0..order {
            let stamp = a + 1;
            for b in 0..order {
                let x = table[a * order + b] as usize;
                if seen[x] == stamp {
                    return Err(GroupError::MalformedTable(format!("row {a} repeats {x}")));
                }
                seen[x] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for b in 0..order {
            let stamp = b + 1;
            for a in 0..order {
                let x = table[a * order + b] as usize;
                if seen[x] == stamp {
                    return Err(GroupError::MalformedTable(format!("column {b} repeats {x}")));
                }
                seen[x] = stamp;
            }
        }
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&x| x == 0).expect("latin row contains identity");
            inverses[a] = b as u32;
        }
        Ok(Self { order, table, inverses, label })
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        let assoc = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..10 * n * n {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !assoc(a, b, c) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[a * self.order..(a + 1) * self.order].iter().map(|&x| x as usize)
    }

    /// `x y x^-1 y^-1`
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    /// `g x g^-1`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn check_element(&self, a: usize) -> Result<(), GroupError> {
        if a < self.order {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange { index: a, order: self.order })
        }
    }

    /// Hex SHA-256 of the order and the row-major table; labels do not
    /// participate.
    pub fn table_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.order as u64).to_le_bytes());
        for &x in &self.table {
            hasher.update(x.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// First eight bytes of [`Self::table_hash`] as a seed.
    pub fn seed(&self) -> u64 {
        let h = self.table_hash();
        u64::from_str_radix(&h[..16], 16).expect("hex digest")
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            table: (0..self.order).map(|a| self.row(a).collect()).collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: GroupJson) -> Result<Self, GroupError> {
        if json.order != json.table.len() {
            return Err(GroupError::MalformedTable(format!(
                "declared order {} but table has {} rows",
                json.order,
                json.table.len()
            )));
        }
        Self::from_table(json.table, json.label)
    }
}

/// A subgroup of a parent group given by its (sorted) element indices.
#[derive(Debug, Clone)]
pub struct Subgroup<'a> {
    parent: &'a FiniteGroup,
    elements: Vec<usize>,
}

impl<'a> Subgroup<'a> {
    /// Wraps a sorted element list, verifying closure.
    pub fn new(parent: &'a FiniteGroup, mut elements: Vec<usize>) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        for &e in &elements {
            parent.check_element(e)?;
        }
        let sub = Self { parent, elements };
        if !sub.is_closed() {
            return Err(GroupError::MalformedTable("element set is not a subgroup".into()));
        }
        Ok(sub)
    }

    pub fn parent(&self) -> &'a FiniteGroup {
        self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.contains(0)
            && self.elements.iter().all(|&a| {
                self.contains(self.parent.inv(a)) && self.elements.iter().all(|&b| self.contains(self.parent.mul(a, b)))
            })
    }

    /// Re-indexes the subgroup as a stand-alone table group.
    /// Element `elements[i]` of the parent becomes index `i`.
    pub fn to_group(&self, label: impl Into<String>) -> FiniteGroup {
        let n = self.order();
        let mut position = vec![usize::MAX; self.parent.order()];
        for (i, &e) in self.elements.iter().enumerate() {
            position[e] = i;
        }
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                table.push(position[self.parent.mul(a, b)] as u32);
            }
        }
        FiniteGroup::from_flat(n, table, label.into()).expect("closed subset of a group is a group")
    }
}

/// Orbit partition of a group under conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// `inverse_class[c]` is the class containing inverses of class `c`.
    pub inverse_class: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Classes are numbered by their smallest element, so class 0 is `{e}`.
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut members = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(x);
        let mut orbit = Vec::new();
        for h in 0..n {
            let y = g.conjugate(h, x);
            if class_of[y] == usize::MAX {
                class_of[y] = c;
                orbit.push(y);
            }
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    let sizes = members.iter().map(Vec::len).collect();
    let inverse_class = representatives.iter().map(|&r| class_of[g.inv(r)]).collect();
    ConjugacyClasses { class_of, representatives, sizes, members, inverse_class }
}

pub fn centralizer(g: &FiniteGroup, x: usize) -> Result<Subgroup<'_>, GroupError> {
    g.check_element(x)?;
    let elements = g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).collect();
    Ok(Subgroup { parent: g, elements })
}

pub fn center(g: &FiniteGroup) -> Subgroup<'_> {
    let elements = g.elements().filter(|&z| g.elements().all(|y| g.mul(z, y) == g.mul(y, z))).collect();
    Subgroup { parent: g, elements }
}

/// `|G : Z(G)|`
pub fn center_index(g: &FiniteGroup) -> usize {
    center(g).index()
}

/// The set (not subgroup) of commutators, sorted.
pub fn commutator_set(g: &FiniteGroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    for x in g.elements() {
        for y in g.elements() {
            seen[g.commutator(x, y)] = true;
        }
    }
    seen.iter().enumerate().filter_map(|(i, &s)| s.then_some(i)).collect()
}

pub fn derived_subgroup(g: &FiniteGroup) -> Subgroup<'_> {
    subgroup_generated(g, &commutator_set(g)).expect("commutators are valid elements")
}

/// Smallest subgroup containing `gens`, by breadth-first closure.
pub fn subgroup_generated<'a>(g: &'a FiniteGroup, gens: &[usize]) -> Result<Subgroup<'a>, GroupError> {
    for &s in gens {
        g.check_element(s)?;
    }
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    let elements = inside.iter().enumerate().filter_map(|(i, &s)| s.then_some(i)).collect();
    Ok(Subgroup { parent: g, elements })
}

/// Constructors that respect an order cap.
#[derive(Debug, Clone, Copy)]
pub struct GroupBuilder {
    pub order_cap: usize,
}

impl Default for GroupBuilder {
    fn default() -> Self {
        Self { order_cap: DEFAULT_ORDER_CAP }
    }
}

fn invalid(construction: &'static str, reason: impl Into<String>) -> GroupError {
    GroupError::InvalidParameter { construction, reason: reason.into() }
}

impl GroupBuilder {
    pub fn with_cap(order_cap: usize) -> Self {
        Self { order_cap }
    }

    fn check_cap(&self, order: usize) -> Result<(), GroupError> {
        if order > self.order_cap {
            Err(GroupError::OrderCapExceeded { order, cap: self.order_cap })
        } else {
            Ok(())
        }
    }

    fn build(
        &self,
        order: usize,
        label: String,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<FiniteGroup, GroupError> {
        self.check_cap(order)?;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u32);
            }
        }
        FiniteGroup::from_flat(order, table, label)
    }

    pub fn cyclic(&self, n: usize) -> Result<FiniteGroup, GroupError> {
        if n == 0 {
            return Err(invalid("cyclic", "n must be at least 1"));
        }
        self.build(n, format!("C{n}"), |a, b| (a + b) % n)
    }

    /// `D_n`, the symmetries of an `n`-gon, of order `2n`.
    /// Element `k + n j` is `r^k s^j`.
    pub fn dihedral(&self, n: usize) -> Result<FiniteGroup, GroupError> {
        if n < 2 {
            return Err(invalid("dihedral", "n must be at least 2"));
        }
        self.build(2 * n, format!("D{n}"), |a, b| {
            let (k, j) = (a % n, a / n);
            let (l, m) = (b % n, b / n);
            let rot = if j == 0 { (k + l) % n } else { (k + n - l) % n };
            rot + n * ((j + m) % 2)
        })
    }

    /// Dicyclic group of order `4n`; `Dic2` is the quaternion group.
    /// Element `k + 2n j` is `a^k x^j` with `a^{2n} = 1`, `x^2 = a^n`,
    /// `x a x^-1 = a^-1`.
    pub fn dicyclic(&self, n: usize) -> Result<FiniteGroup, GroupError> {
        if n < 2 {
            return Err(invalid("dicyclic", "n must be at least 2"));
        }
        let m = 2 * n;
        let label = if n == 2 { "Q8".to_string() } else { format!("Dic{n}") };
        self.build(2 * m, label, |a, b| {
            let (k, j) = (a % m, a / m);
            let (l, jj) = (b % m, b / m);
            if j == 0 {
                (k + l) % m + m * jj
            } else if jj == 0 {
                (k + m - l) % m + m
            } else {
                (k + m - l + n) % m
            }
        })
    }

    pub fn symmetric(&self, n: usize) -> Result<FiniteGroup, GroupError> {
        let perms = self.permutations("symmetric", n, false)?;
        self.permutation_group(perms, format!("S{n}"))
    }

    pub fn alternating(&self, n: usize) -> Result<FiniteGroup, GroupError> {
        let perms = self.permutations("alternating", n, true)?;
        self.permutation_group(perms, format!("A{n}"))
    }

    fn permutations(
        &self,
        construction: &'static str,
        n: usize,
        even_only: bool,
    ) -> Result<Vec<Vec<usize>>, GroupError> {
        if !(1..=6).contains(&n) {
            return Err(invalid(construction, "n must lie in 1..=6"));
        }
        let full: usize = (1..=n).product();
        self.check_cap(if even_only && n >= 2 { full / 2 } else { full })?;
        let mut out = Vec::with_capacity(full);
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            if !even_only || permutation_is_even(&p) {
                out.push(p.clone());
            }
            if !next_permutation(&mut p) {
                break;
            }
        }
        Ok(out)
    }

    /// Lexicographic order puts the identity first. Product is composition,
    /// `(p q)(i) = p(q(i))`.
    fn permutation_group(&self, perms: Vec<Vec<usize>>, label: String) -> Result<FiniteGroup, GroupError> {
        let index: std::collections::HashMap<Vec<usize>, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        self.build(perms.len(), label, |a, b| {
            let composed: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
            index[&composed]
        })
    }

    /// Upper unitriangular 3x3 matrices over `Z/n`, order `n^3`.
    /// Element `a n^2 + b n + c` is the matrix with superdiagonal `(a, b)`
    /// and corner `c`.
    pub fn heisenberg_mod(&self, n: usize) -> Result<FiniteGroup, GroupError> {
        if n < 2 {
            return Err(invalid("heisenberg", "n must be at least 2"));
        }
        let order = n.checked_pow(3).ok_or(GroupError::OrderCapExceeded { order: usize::MAX, cap: self.order_cap })?;
        self.build(order, format!("Heis{n}"), |x, y| {
            let (a, b, c) = (x / (n * n), (x / n) % n, x % n);
            let (a2, b2, c2) = (y / (n * n), (y / n) % n, y % n);
            let a3 = (a + a2) % n;
            let b3 = (b + b2) % n;
            let c3 = (c + c2 + a * b2) % n;
            a3 * n * n + b3 * n + c3
        })
    }

    /// `(g, h)` is encoded as `g |H| + h`.
    pub fn direct_product(&self, g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let order = g
            .order()
            .checked_mul(h.order())
            .ok_or(GroupError::OrderCapExceeded { order: usize::MAX, cap: self.order_cap })?;
        let nh = h.order();
        let label = format!("{} x {}", g.label(), wrap_factor(h.label()));
        self.build(order, label, |a, b| g.mul(a / nh, b / nh) * nh + h.mul(a % nh, b % nh))
    }

    /// `N ⋊ C_m` where the generator of `C_m` acts on the abelian group `N`
    /// through the permutation `action`. `(x, i)` is encoded as `x m + i` and
    /// `(x, i)(y, j) = (x · action^i(y), i + j mod m)`.
    pub fn semidirect_product(&self, n: &FiniteGroup, m: usize, action: &[usize]) -> Result<FiniteGroup, GroupError> {
        if m == 0 {
            return Err(invalid("semidirect", "m must be at least 1"));
        }
        if !n.is_abelian() {
            return Err(invalid("semidirect", format!("normal factor {} is not abelian", n.label())));
        }
        let powers = automorphism_powers(n, action, m)?;
        let order =
            n.order().checked_mul(m).ok_or(GroupError::OrderCapExceeded { order: usize::MAX, cap: self.order_cap })?;
        let label = format!("sd({}, C{m}, {:?})", n.label(), action);
        self.build(order, label, |a, b| {
            let (x, i) = (a / m, a % m);
            let (y, j) = (b / m, b % m);
            n.mul(x, powers[i][y]) * m + (i + j) % m
        })
    }
}

/// Validates `action` as an automorphism of `n` whose order divides `m`
/// and returns `action^0 ..= action^(m-1)`.
pub fn automorphism_powers(n: &FiniteGroup, action: &[usize], m: usize) -> Result<Vec<Vec<usize>>, GroupError> {
    let order = n.order();
    if action.len() != order {
        return Err(GroupError::NotAutomorphism(format!(
            "action has length {} but the group has order {order}",
            action.len()
        )));
    }
    let mut hit = vec![false; order];
    for &y in action {
        if y >= order || hit[y] {
            return Err(GroupError::NotAutomorphism("action is not a permutation".into()));
        }
        hit[y] = true;
    }
    for a in 0..order {
        for b in 0..order {
            if action[n.mul(a, b)] != n.mul(action[a], action[b]) {
                return Err(GroupError::NotAutomorphism(format!("fails on ({a}, {b})")));
            }
        }
    }
    let mut powers = vec![(0..order).collect::<Vec<_>>()];
    for i in 1..=m {
        let prev = &powers[i - 1];
        let next: Vec<usize> = prev.iter().map(|&y| action[y]).collect();
        powers.push(next);
    }
    if powers[m].iter().enumerate().any(|(i, &y)| i != y) {
        return Err(GroupError::ActionOrder { m });
    }
    powers.truncate(m);
    Ok(powers)
}

fn wrap_factor(label: &str) -> String {
    if label.contains(" x ") {
        format!("({label})")
    } else {
        label.to_string()
    }
}

fn permutation_is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn make_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().cyclic(n)
}

pub fn make_dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().dihedral(n)
}

pub fn make_dicyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().dicyclic(n)
}

pub fn make_symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().symmetric(n)
}

pub fn make_alternating(n: usize) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().alternating(n)
}

pub fn make_heisenberg_mod(n: usize) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().heisenberg_mod(n)
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().direct_product(g, h)
}

pub fn semidirect_product(n: &FiniteGroup, m: usize, action: &[usize]) -> Result<FiniteGroup, GroupError> {
    GroupBuilder::default().semidirect_product(n, m, action)
}
