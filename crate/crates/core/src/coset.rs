//! Todd–Coxeter coset enumeration.
//!
//! HLT-style relator scanning with a union-find coincidence phase and a
//! deterministic processing order: cosets in ascending order, relators in
//! presentation order, row gaps filled in column order. The same input always
//! produces the same table, on any platform.
//!
//! A completed [`CosetTable`] is immutable. Coset 0 is the subgroup itself;
//! callers that print tables use 1-based numbering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Letter, Presentation, Word};

/// Generators of a subgroup, as words over the ambient alphabet.
/// These generate the subgroup itself, not its normal closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub generators: Vec<Word>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Word>) -> Self {
        Self { generators }
    }

    pub fn trivial() -> Self {
        Self { generators: Vec::new() }
    }

    fn validate(&self, p: &Presentation) -> Result<()> {
        for w in &self.generators {
            if w.arity() != p.arity() {
                return Err(Error::GeneratorSetMismatch {
                    left: p.arity(),
                    right: w.arity(),
                });
            }
        }
        Ok(())
    }
}

fn col(letter: Letter) -> usize {
    2 * letter.gen + usize::from(letter.inv)
}

fn col_letter(c: usize) -> Letter {
    Letter::new(c / 2, c % 2 == 1)
}

/// A completed, collapsed coset table for a finite-index subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    presentation: Presentation,
    subgroup: SubgroupSpec,
    /// rows[c][2g] = c·g, rows[c][2g+1] = c·g⁻¹; every entry defined.
    rows: Vec<Vec<usize>>,
    /// Schreier transversal: reps[0] = identity and trace(0, reps[c]) = c.
    reps: Vec<Word>,
}

struct Enumerator {
    ncols: usize,
    rows: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    pending: std::collections::VecDeque<(usize, usize)>,
    allocated: usize,
    live: usize,
    limit: usize,
}

impl Enumerator {
    fn new(ncols: usize, limit: usize) -> Self {
        Self {
            ncols,
            rows: vec![vec![None; ncols]],
            parent: vec![0],
            pending: std::collections::VecDeque::new(),
            allocated: 1,
            live: 1,
            limit,
        }
    }

    fn find(&mut self, mut c: usize) -> usize {
        while self.parent[c] != c {
            let grand = self.parent[self.parent[c]];
            self.parent[c] = grand;
            c = grand;
        }
        c
    }

    fn is_live(&mut self, c: usize) -> bool {
        self.find(c) == c
    }

    fn new_coset(&mut self) -> Result<usize> {
        if self.allocated >= self.limit {
            return Err(Error::LimitExceeded { limit: self.limit });
        }
        let c = self.rows.len();
        self.rows.push(vec![None; self.ncols]);
        self.parent.push(c);
        self.allocated += 1;
        self.live += 1;
        Ok(c)
    }

    fn entry(&mut self, c: usize, column: usize) -> Option<usize> {
        self.rows[c][column].map(|d| self.find(d))
    }

    fn set_edge(&mut self, from: usize, letter: Letter, to: usize) {
        self.rows[from][col(letter)] = Some(to);
        self.rows[to][col(letter.inverse())] = Some(from);
    }

    /// Forces the path `alpha --w--> alpha`, defining cosets in the gap.
    fn scan_and_fill(&mut self, alpha: usize, w: &Word) -> Result<()> {
        let letters = w.letters();
        let mut f = alpha;
        let mut i = 0;
        let mut b = alpha;
        let mut j = letters.len();
        loop {
            while i < j {
                match self.entry(f, col(letters[i])) {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincide(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.entry(b, col(letters[j - 1].inverse())) {
                    Some(prev) => {
                        b = prev;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                if f != b {
                    self.coincide(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                // Single gap: a deduction closes the scan.
                self.set_edge(f, letters[i], b);
                return Ok(());
            }
            let fresh = self.new_coset()?;
            self.set_edge(f, letters[i], fresh);
            f = fresh;
            i += 1;
        }
    }

    fn coincide(&mut self, a: usize, b: usize) {
        self.pending.push_back((a, b));
        while let Some((x, y)) = self.pending.pop_front() {
            let x = self.find(x);
            let y = self.find(y);
            if x == y {
                continue;
            }
            // Smaller index survives, so coset 0 can never die.
            let (keep, dead) = if x < y { (x, y) } else { (y, x) };
            self.parent[dead] = keep;
            self.live -= 1;
            for column in 0..self.ncols {
                if let Some(d) = self.rows[dead][column] {
                    let d = self.find(d);
                    match self.entry(keep, column) {
                        None => {
                            let letter = col_letter(column);
                            self.set_edge(keep, letter, d);
                        }
                        Some(existing) => {
                            if existing != d {
                                self.pending.push_back((existing, d));
                            }
                        }
                    }
                }
            }
        }
    }
}

impl CosetTable {
    /// Enumerates the cosets of the subgroup generated by `subgroup` in the
    /// group presented by `presentation`.
    ///
    /// `limit` bounds the total number of rows ever allocated, dead rows
    /// included. On success the table is complete and collapsed, with number
    /// of rows equal to the index; enumeration that cannot finish within the
    /// limit fails with [`Error::LimitExceeded`] and never yields a partial
    /// table.
    pub fn enumerate(
        presentation: &Presentation,
        subgroup: &SubgroupSpec,
        limit: usize,
    ) -> Result<CosetTable> {
        subgroup.validate(presentation)?;
        if limit < 1 {
            return Err(Error::LimitExceeded { limit });
        }
        let ncols = 2 * presentation.arity();
        let mut en = Enumerator::new(ncols, limit);
        // Plain HLT; a Felsch-style lookahead hybrid is the extension point
        // if presentations ever outgrow desk-scale indices.
        for w in &subgroup.generators {
            en.scan_and_fill(0, w)?;
        }
        let mut alpha = 0;
        while alpha < en.rows.len() {
            if !en.is_live(alpha) {
                alpha += 1;
                continue;
            }
            for relator in presentation.relators() {
                en.scan_and_fill(alpha, relator)?;
                if !en.is_live(alpha) {
                    break;
                }
            }
            if en.is_live(alpha) {
                for column in 0..ncols {
                    if en.entry(alpha, column).is_none() {
                        let fresh = en.new_coset()?;
                        en.set_edge(alpha, col_letter(column), fresh);
                    }
                }
            }
            alpha += 1;
        }

        // Compact to live cosets, renumbered in ascending order.
        let mut remap = vec![usize::MAX; en.rows.len()];
        let mut live_order = Vec::new();
        for (c, slot) in remap.iter_mut().enumerate() {
            if en.is_live(c) {
                *slot = live_order.len();
                live_order.push(c);
            }
        }
        let mut rows = Vec::with_capacity(live_order.len());
        for &c in &live_order {
            let mut row = Vec::with_capacity(ncols);
            for column in 0..ncols {
                let target = en.entry(c, column).ok_or_else(|| {
                    Error::InvariantViolation("incomplete row after enumeration".into())
                })?;
                row.push(remap[target]);
            }
            rows.push(row);
        }

        let table = CosetTable {
            presentation: presentation.clone(),
            subgroup: subgroup.clone(),
            reps: schreier_transversal(&rows, presentation.arity()),
            rows,
        };
        table.verify()?;
        Ok(table)
    }

    /// Builds a complete table directly from a transitive right action.
    ///
    /// `action[g][c]` is the image of coset `c` under generator `g`; each
    /// `action[g]` must be a permutation and every relator must act trivially.
    /// Coset 0 is the stabilized point. The subgroup spec is left empty;
    /// attach one with [`CosetTable::attach_subgroup`].
    pub fn from_action(presentation: &Presentation, action: &[Vec<usize>]) -> Result<CosetTable> {
        if action.len() != presentation.arity() {
            return Err(Error::InvariantViolation(
                "one permutation per generator required".into(),
            ));
        }
        let n = action.first().map_or(1, Vec::len).max(1);
        let mut rows = vec![vec![0usize; 2 * presentation.arity()]; n];
        for (g, perm) in action.iter().enumerate() {
            if perm.len() != n {
                return Err(Error::InvariantViolation("ragged action".into()));
            }
            let mut seen = vec![false; n];
            for (c, &d) in perm.iter().enumerate() {
                if d >= n || seen[d] {
                    return Err(Error::InvariantViolation(
                        "generator action is not a permutation".into(),
                    ));
                }
                seen[d] = true;
                rows[c][2 * g] = d;
                rows[d][2 * g + 1] = c;
            }
        }
        let table = CosetTable {
            presentation: presentation.clone(),
            subgroup: SubgroupSpec::trivial(),
            reps: schreier_transversal(&rows, presentation.arity()),
            rows,
        };
        // Transitivity: the transversal BFS must reach every coset.
        if table.reps.len() != table.rows.len() {
            return Err(Error::InvariantViolation("action is not transitive".into()));
        }
        for relator in presentation.relators() {
            for c in 0..table.index() {
                if table.trace(c, relator)? != c {
                    return Err(Error::InvariantViolation(format!(
                        "relator {relator} does not act trivially"
                    )));
                }
            }
        }
        Ok(table)
    }

    /// Attaches (and verifies) a subgroup spec on a table built from an action.
    pub fn attach_subgroup(mut self, subgroup: SubgroupSpec) -> Result<CosetTable> {
        subgroup.validate(&self.presentation)?;
        self.subgroup = subgroup;
        self.verify()?;
        Ok(self)
    }

    fn verify(&self) -> Result<()> {
        for relator in self.presentation.relators() {
            for c in 0..self.index() {
                if self.trace(c, relator)? != c {
                    return Err(Error::InvariantViolation(format!(
                        "relator {relator} moves coset {c}"
                    )));
                }
            }
        }
        for w in &self.subgroup.generators {
            if self.trace(0, w)? != 0 {
                return Err(Error::InvariantViolation(format!(
                    "subgroup generator {w} moves coset 0"
                )));
            }
        }
        if self.reps.len() != self.index() || !self.reps[0].is_identity() {
            return Err(Error::InvariantViolation("bad transversal".into()));
        }
        for (c, rep) in self.reps.iter().enumerate() {
            if self.trace(0, rep)? != c {
                return Err(Error::InvariantViolation(format!(
                    "transversal word for coset {c} traces elsewhere"
                )));
            }
        }
        Ok(())
    }

    /// The index of the subgroup: the number of cosets.
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        &self.subgroup
    }

    /// Schreier transversal representative of a coset (coset 0 ↦ identity).
    pub fn rep(&self, coset: usize) -> &Word {
        &self.reps[coset]
    }

    /// Single step of the right action.
    pub fn step(&self, coset: usize, letter: Letter) -> usize {
        self.rows[coset][col(letter)]
    }

    /// Traces the right action of a word from a starting coset.
    pub fn trace(&self, start: usize, w: &Word) -> Result<usize> {
        if start >= self.rows.len() {
            return Err(Error::InvalidCoset {
                coset: start,
                rows: self.rows.len(),
            });
        }
        if w.arity() != self.presentation.arity() {
            return Err(Error::GeneratorSetMismatch {
                left: self.presentation.arity(),
                right: w.arity(),
            });
        }
        let mut c = start;
        for &letter in w.letters() {
            c = self.rows[c][col(letter)];
        }
        Ok(c)
    }

    /// Membership in the subgroup: true iff the word traces coset 0 to itself.
    pub fn contains(&self, w: &Word) -> Result<bool> {
        Ok(self.trace(0, w)? == 0)
    }

    /// True iff the subgroup is normal in the ambient group, i.e. every
    /// subgroup generator acts trivially on every coset.
    pub fn is_normal(&self) -> Result<bool> {
        for w in &self.subgroup.generators {
            for c in 0..self.index() {
                if self.trace(c, w)? != c {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The right coset action as one permutation per generator.
    pub fn permutation_rep(&self) -> Vec<Vec<usize>> {
        (0..self.presentation.arity())
            .map(|g| (0..self.index()).map(|c| self.rows[c][2 * g]).collect())
            .collect()
    }

    /// Rows as printable integers: coset, then its image under each generator
    /// and each inverse, 1-based.
    pub fn rows_1based(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(c, row)| {
                let mut out = Vec::with_capacity(row.len() + 1);
                out.push(c + 1);
                out.extend(row.iter().map(|&d| d + 1));
                out
            })
            .collect()
    }
}

/// Breadth-first Schreier transversal in column order (g0, g0⁻¹, g1, ...).
/// BFS trees are prefix-closed, which Reidemeister–Schreier rewriting needs.
fn schreier_transversal(rows: &[Vec<usize>], arity: usize) -> Vec<Word> {
    let mut reps: Vec<Option<Word>> = vec![None; rows.len()];
    reps[0] = Some(Word::identity(arity));
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for (column, &d) in rows[c].iter().enumerate() {
            if reps[d].is_none() {
                let letter = col_letter(column);
                let rep = Word::reduce(
                    arity,
                    reps[c]
                        .as_ref()
                        .unwrap()
                        .letters()
                        .iter()
                        .copied()
                        .chain([letter]),
                );
                reps[d] = Some(rep);
                queue.push_back(d);
            }
        }
    }
    reps.into_iter().flatten().collect()
}
