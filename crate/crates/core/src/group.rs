//! Explicit finite groups with dense integer elements and full tables.
//!
//! Truncated structure groups at desk scale are small, so elements are plain
//! indices with explicit multiplication and inverse tables; every search over
//! them is cache-friendly and easy to compare against brute-force oracles.
//! Element 0 is always the identity.

use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    /// Flattened k×k table: mul[a * order + b] = a·b.
    mul: Vec<usize>,
    inv: Vec<usize>,
    /// Distinguished generating set, with representative words when the group
    /// was built from a coset table.
    generators: Vec<usize>,
    generator_words: Vec<Word>,
    name: String,
}

impl FiniteGroup {
    /// Builds from a complete multiplication table (row-major, identity 0).
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        let mut mul = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(Error::InvariantViolation("ragged multiplication table".into()));
            }
            mul.extend_from_slice(row);
        }
        let mut g = Self {
            order,
            mul,
            inv: vec![0; order],
            generators: Vec::new(),
            generator_words: Vec::new(),
            name: name.into(),
        };
        g.fill_inverses()?;
        g.validate()?;
        Ok(g)
    }

    /// The group of cosets of a normal subgroup: elements are cosets, the
    /// product of cosets `c` and `d` is `trace(c, rep(d))`, identity is
    /// coset 0. Generator representatives from the ambient presentation are
    /// retained.
    pub fn from_normal_coset_table(name: impl Into<String>, t: &CosetTable) -> Result<Self> {
        if !t.is_normal()? {
            return Err(Error::NotNormal);
        }
        let order = t.index();
        let mut mul = vec![0usize; order * order];
        for c in 0..order {
            for d in 0..order {
                mul[c * order + d] = t.trace(c, t.rep(d))?;
            }
        }
        let mut g = Self {
            order,
            mul,
            inv: vec![0; order],
            generators: Vec::new(),
            generator_words: Vec::new(),
            name: name.into(),
        };
        g.fill_inverses()?;
        g.validate()?;
        let gen_words = t.presentation().generator_words();
        for w in gen_words {
            let image = t.trace(0, &w)?;
            g.generators.push(image);
            g.generator_words.push(w);
        }
        Ok(g)
    }

    /// Direct product; elements are pairs numbered `a * |right| + b`.
    pub fn direct_product(name: impl Into<String>, left: &FiniteGroup, right: &FiniteGroup) -> Result<Self> {
        let order = left.order * right.order;
        let mut mul = vec![0usize; order * order];
        let code = |a: usize, b: usize| a * right.order + b;
        for a1 in 0..left.order {
            for b1 in 0..right.order {
                for a2 in 0..left.order {
                    for b2 in 0..right.order {
                        mul[code(a1, b1) * order + code(a2, b2)] =
                            code(left.mul(a1, a2), right.mul(b1, b2));
                    }
                }
            }
        }
        let mut g = Self {
            order,
            mul,
            inv: vec![0; order],
            generators: Vec::new(),
            generator_words: Vec::new(),
            name: name.into(),
        };
        g.fill_inverses()?;
        g.validate()?;
        // Injected generators of the factors generate the product.
        for &a in &left.generators {
            g.generators.push(code(a, 0));
        }
        for &b in &right.generators {
            g.generators.push(code(0, b));
        }
        Ok(g)
    }

    fn fill_inverses(&mut self) -> Result<()> {
        for a in 0..self.order {
            let mut found = None;
            for b in 0..self.order {
                if self.mul(a, b) == 0 && self.mul(b, a) == 0 {
                    found = Some(b);
                    break;
                }
            }
            self.inv[a] = found.ok_or_else(|| {
                Error::InvariantViolation(format!("element {a} has no inverse"))
            })?;
        }
        Ok(())
    }

    /// Checks the group axioms over the table: identity, inverses, closure by
    /// construction, and associativity — exhaustively up to order 64, on
    /// seeded random triples above that.
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvariantViolation("empty group".into()));
        }
        for a in 0..self.order {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvariantViolation("identity law fails".into()));
            }
            if self.mul(a, self.inv[a]) != 0 || self.mul(self.inv[a], a) != 0 {
                return Err(Error::InvariantViolation("inverse table inconsistent".into()));
            }
            for b in 0..self.order {
                if self.mul(a, b) >= self.order {
                    return Err(Error::InvariantViolation("table entry out of range".into()));
                }
            }
        }
        let check = |a: usize, b: usize, c: usize| -> bool {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if self.order <= 64 {
            for a in 0..self.order {
                for b in 0..self.order {
                    for c in 0..self.order {
                        if !check(a, b, c) {
                            return Err(Error::InvariantViolation("associativity fails".into()));
                        }
                    }
                }
            }
        } else {
            let mut rng = crate::rng::SplitMix64::new(0x5eed_ab1e);
            for _ in 0..20_000 {
                let a = rng.below(self.order);
                let b = rng.below(self.order);
                let c = rng.below(self.order);
                if !check(a, b, c) {
                    return Err(Error::InvariantViolation("associativity fails".into()));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_words(&self) -> &[Word] {
        &self.generator_words
    }

    /// Order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Sorted multiset of element orders, a cheap isomorphism invariant.
    pub fn element_order_multiset(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        orders.sort_unstable();
        orders
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Evaluates a word at given generator images.
    pub fn eval_word(&self, w: &Word, images: &[usize]) -> Result<usize> {
        let mut acc = 0usize;
        for letter in w.letters() {
            let img = *images.get(letter.gen).ok_or(Error::MissingImage(letter.gen))?;
            let img = if letter.inv { self.inv[img] } else { img };
            acc = self.mul(acc, img);
        }
        Ok(acc)
    }

    /// Smallest subset closed under multiplication containing the seeds and
    /// the identity.
    pub fn subgroup_generated(&self, seeds: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut frontier = vec![0usize];
        for &s in seeds {
            if !member[s] {
                member[s] = true;
                frontier.push(s);
            }
        }
        let mut all: Vec<usize> = frontier.clone();
        while let Some(x) = frontier.pop() {
            for i in 0..all.len() {
                let y = all[i];
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !member[z] {
                        member[z] = true;
                        frontier.push(z);
                        all.push(z);
                    }
                }
            }
        }
        let mut members: Vec<usize> = (0..self.order).filter(|&x| member[x]).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn whole_subgroup(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Partition into left cosets xH with least-element representatives,
    /// representatives in ascending order.
    pub fn left_coset_space(&self, h: &Subgroup) -> CosetSpace {
        let mut assignment = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if assignment[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &m in &h.members {
                assignment[self.mul(x, m)] = id;
            }
        }
        CosetSpace { reps, assignment }
    }

    /// All subgroups, found by closing each known subgroup with each outside
    /// element. Sorted by (size, member list) so the order is canonical.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let trivial = self.trivial_subgroup();
        let mut found: Vec<Subgroup> = vec![trivial.clone()];
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for x in 1..self.order {
                if h.contains(x) {
                    continue;
                }
                let mut seeds = h.members.clone();
                seeds.push(x);
                let bigger = self.subgroup_generated(&seeds);
                if !found.contains(&bigger) {
                    found.push(bigger.clone());
                    frontier.push(bigger);
                }
            }
        }
        found.sort_by(|a, b| {
            (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members))
        });
        found
    }

    /// Normal closure of a set of elements.
    pub fn normal_closure(&self, seeds: &[usize]) -> Subgroup {
        let mut sub = self.subgroup_generated(seeds);
        loop {
            let mut extra = Vec::new();
            for g in 0..self.order {
                for &x in &sub.members {
                    let conj = self.conjugate(g, x);
                    if !sub.contains(conj) {
                        extra.push(conj);
                    }
                }
            }
            if extra.is_empty() {
                return sub;
            }
            let mut seeds = sub.members.clone();
            seeds.extend(extra);
            sub = self.subgroup_generated(&seeds);
        }
    }

    pub fn is_normal_subgroup(&self, h: &Subgroup) -> bool {
        for g in 0..self.order {
            for &x in &h.members {
                if !h.contains(self.conjugate(g, x)) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff the only normal subgroups are trivial and the whole group.
    pub fn is_simple(&self) -> bool {
        if self.order <= 1 {
            return false;
        }
        for x in 1..self.order {
            if self.normal_closure(&[x]).members.len() != self.order {
                return false;
            }
        }
        true
    }
}

/// A subgroup of a [`FiniteGroup`] as a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Wraps a sorted member list, verifying closure in the parent.
    pub fn checked(parent: &FiniteGroup, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(Error::InvariantViolation("subgroup must contain identity".into()));
        }
        let sub = Subgroup { members };
        for &a in &sub.members {
            if a >= parent.order() {
                return Err(Error::InvariantViolation("member out of range".into()));
            }
            if !sub.contains(parent.inverse(a)) {
                return Err(Error::InvariantViolation("subgroup not closed under inverse".into()));
            }
            for &b in &sub.members {
                if !sub.contains(parent.mul(a, b)) {
                    return Err(Error::InvariantViolation("subgroup not closed under product".into()));
                }
            }
        }
        if !parent.order().is_multiple_of(sub.members.len()) {
            return Err(Error::InvariantViolation("subgroup order violates Lagrange".into()));
        }
        Ok(sub)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Intersection of two subgroups of the same parent.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        }
    }

    /// Restriction of this subgroup to abelian-ness inside its parent.
    pub fn is_abelian_in(&self, parent: &FiniteGroup) -> bool {
        for &a in &self.members {
            for &b in &self.members {
                if parent.mul(a, b) != parent.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }
}

/// The left coset space G/H: representative list plus element → coset map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSpace {
    /// Least element of each coset, in ascending order of representative.
    reps: Vec<usize>,
    /// assignment[x] = index of the coset containing x.
    assignment: Vec<usize>,
}

impl CosetSpace {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn members_of(&self, coset: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&x| self.assignment[x] == coset)
            .collect()
    }
}

/// A verified homomorphism between explicit finite groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    /// images[x] for every source element; usize::MAX where undefined
    /// (maps defined on a subgroup leave the rest undefined).
    images: Vec<usize>,
    injective: bool,
}

impl GroupHom {
    /// Builds a hom defined on `dom` (a subgroup of `src`) into `tgt`,
    /// verifying multiplicativity on every pair.
    pub fn new(
        src: &FiniteGroup,
        dom: &Subgroup,
        tgt: &FiniteGroup,
        assignment: &[(usize, usize)],
    ) -> Result<Self> {
        let mut images = vec![usize::MAX; src.order()];
        for &(x, y) in assignment {
            images[x] = y;
        }
        for &m in dom.members() {
            if images[m] == usize::MAX {
                return Err(Error::MissingImage(m));
            }
        }
        for &a in dom.members() {
            for &b in dom.members() {
                let lhs = images[src.mul(a, b)];
                let rhs = tgt.mul(images[a], images[b]);
                if lhs != rhs {
                    return Err(Error::InvariantViolation(format!(
                        "not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        let mut seen = vec![false; tgt.order()];
        let mut injective = true;
        for &m in dom.members() {
            if seen[images[m]] {
                injective = false;
            }
            seen[images[m]] = true;
        }
        Ok(Self { images, injective })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_defined_at(&self, x: usize) -> bool {
        self.images.get(x).is_some_and(|&y| y != usize::MAX)
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    /// Image tuple restricted to the (sorted) domain, for ordering.
    pub fn image_tuple(&self, dom: &Subgroup) -> Vec<usize> {
        dom.members().iter().map(|&m| self.images[m]).collect()
    }

    pub fn image_set(&self, dom: &Subgroup) -> Vec<usize> {
        let mut img: Vec<usize> = dom.members().iter().map(|&m| self.images[m]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cyclic_eight_from_table() {
        let t = catalog::builtin("z8").unwrap();
        let z8 = &t.group;
        assert_eq!(z8.order(), 8);
        assert!(z8.is_abelian());
        assert_eq!(z8.element_order_multiset(), vec![1, 2, 4, 4, 8, 8, 8, 8]);
    }

    #[test]
    fn s3_is_nonabelian_with_expected_orders() {
        let s3 = catalog::builtin("s3").unwrap().group;
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.element_order_multiset(), vec![1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn q8_is_nonabelian() {
        let q8 = catalog::builtin("q8").unwrap().group;
        assert_eq!(q8.order(), 8);
        assert!(!q8.is_abelian());
        assert_eq!(q8.element_order_multiset(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn subgroup_generated_examples() {
        let s3 = catalog::builtin("s3").unwrap().group;
        assert_eq!(s3.subgroup_generated(&[]).len(), 1);
        // A transposition generates an order-2 subgroup.
        let transposition = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        assert_eq!(s3.subgroup_generated(&[transposition]).len(), 2);

        let z8 = catalog::builtin("z8").unwrap().group;
        let two = (0..8).find(|&x| z8.element_order(x) == 4).unwrap();
        assert_eq!(z8.subgroup_generated(&[two]).members(), &[0, two, z8.mul(two, two), z8.mul(z8.mul(two, two), two)]);
        assert_eq!(z8.subgroup_generated(&[two]).len(), 4);
    }

    #[test]
    fn left_cosets_partition_lagrange() {
        let s3 = catalog::builtin("s3").unwrap().group;
        let whole = s3.whole_subgroup();
        assert_eq!(s3.left_coset_space(&whole).count(), 1);
        assert_eq!(s3.left_coset_space(&s3.trivial_subgroup()).count(), 6);
        let transposition = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let h = s3.subgroup_generated(&[transposition]);
        let space = s3.left_coset_space(&h);
        assert_eq!(space.count(), 3);
        for c in 0..3 {
            assert_eq!(space.members_of(c).len(), h.len());
        }
    }

    #[test]
    fn all_subgroups_of_s3() {
        let s3 = catalog::builtin("s3").unwrap().group;
        let subs = s3.all_subgroups();
        // 1 trivial + 3 of order 2 + 1 of order 3 + S3 itself.
        assert_eq!(subs.len(), 6);
        let sizes: Vec<usize> = subs.iter().map(Subgroup::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn simplicity() {
        assert!(catalog::builtin("a5").unwrap().group.is_simple());
        assert!(!catalog::builtin("s4").unwrap().group.is_simple());
        assert!(!catalog::builtin("s3").unwrap().group.is_simple());
        // ℤ/5 is simple but abelian.
        assert!(catalog::builtin("z5").unwrap().group.is_simple());
    }

    #[test]
    fn direct_product_orders() {
        let z2 = catalog::builtin("z2").unwrap().group;
        let z4 = catalog::builtin("z4").unwrap().group;
        let g = FiniteGroup::direct_product("z4xz2", &z4, &z2).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        assert_eq!(g.element_order_multiset(), vec![1, 2, 2, 2, 4, 4, 4, 4]);
    }
}
