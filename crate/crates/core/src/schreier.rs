//! Reidemeister–Schreier rewriting: generators and presentations of a
//! finite-index subgroup from its coset table, conservative Tietze
//! simplification, and sound abelianness certification.

use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::words::{GeneratorSet, Letter, Presentation, Word};

/// One Schreier generator: the pair (coset, ambient generator) and the
/// subgroup element rep(c) · g · rep(c·g)⁻¹ it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub generator: usize,
    pub word: Word,
}

/// Schreier generators of a subgroup plus the rewritten presentation on them.
#[derive(Debug, Clone)]
pub struct SchreierData {
    pub generators: Vec<SchreierGenerator>,
    pub presentation: Presentation,
    /// pair_index[c][g] = Some(position) when (c, g) is a nontrivial pair.
    pair_index: Vec<Vec<Option<usize>>>,
}

impl SchreierData {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Expands a word over the Schreier generators back to an ambient word.
    pub fn expand(&self, w: &Word) -> Result<Word> {
        let images: Vec<Word> = self.generators.iter().map(|s| s.word.clone()).collect();
        w.substitute(&images)
    }
}

/// The nontrivial Schreier generators of the subgroup of a completed table.
/// Pairs whose word freely reduces to the identity (tree edges) are dropped.
pub fn schreier_generators(t: &CosetTable) -> Vec<SchreierGenerator> {
    let arity = t.presentation().arity();
    let mut out = Vec::new();
    for coset in 0..t.index() {
        for generator in 0..arity {
            let letter = Letter::new(generator, false);
            let target = t.step(coset, letter);
            let word = t
                .rep(coset)
                .concat(&Word::reduce(arity, [letter]))
                .and_then(|w| w.concat(&t.rep(target).inverse()))
                .expect("words share the ambient alphabet");
            if !word.is_identity() {
                out.push(SchreierGenerator {
                    coset,
                    generator,
                    word,
                });
            }
        }
    }
    out
}

/// Rewrites the subgroup presentation: Schreier generators, plus one relator
/// for each (coset, ambient relator) pair, rewritten through the transversal.
pub fn rewrite_subgroup_presentation(t: &CosetTable) -> Result<SchreierData> {
    let arity = t.presentation().arity();
    let generators = schreier_generators(t);
    let mut pair_index = vec![vec![None; arity]; t.index()];
    for (i, s) in generators.iter().enumerate() {
        pair_index[s.coset][s.generator] = Some(i);
    }
    let sub_arity = generators.len();
    let expansion_images: Vec<Word> = generators.iter().map(|s| s.word.clone()).collect();

    let mut relators = Vec::new();
    for coset in 0..t.index() {
        for relator in t.presentation().relators() {
            let mut letters = Vec::new();
            let mut current = coset;
            for &letter in relator.letters() {
                if letter.inv {
                    // crossing the edge (c·g⁻¹, g) backwards
                    let source = t.step(current, letter);
                    if let Some(idx) = pair_index[source][letter.gen] {
                        letters.push(Letter::new(idx, true));
                    }
                    current = source;
                } else {
                    if let Some(idx) = pair_index[current][letter.gen] {
                        letters.push(Letter::new(idx, false));
                    }
                    current = t.step(current, letter);
                }
            }
            if current != coset {
                return Err(Error::InvariantViolation(
                    "relator does not close during rewriting".into(),
                ));
            }
            let rewritten = Word::reduce(sub_arity, letters);
            // Consistency: the rewrite, expanded back through the generator
            // definitions, must freely equal rep(c) · R · rep(c)⁻¹.
            let expanded = if sub_arity == 0 {
                Word::identity(arity)
            } else {
                rewritten.substitute(&expansion_images)?
            };
            let conjugate = t
                .rep(coset)
                .concat(relator)?
                .concat(&t.rep(coset).inverse())?;
            if expanded != conjugate {
                return Err(Error::InvariantViolation(format!(
                    "rewrite of {relator} at coset {coset} does not expand back"
                )));
            }
            relators.push(rewritten);
        }
    }

    let presentation = Presentation::new(GeneratorSet::fresh(sub_arity), relators)?;
    Ok(SchreierData {
        generators,
        presentation,
        pair_index,
    })
}

impl SchreierData {
    pub fn pair(&self, coset: usize, generator: usize) -> Option<usize> {
        self.pair_index[coset][generator]
    }
}

/// Conservative Tietze simplification, iterated to a fixpoint.
///
/// Moves used: free/cyclic reduction of relators, deletion of empty
/// relators, and elimination of a generator that occurs exactly once in some
/// relator. Elimination candidates are chosen by shortest relator first, so
/// substitution growth stays small and the result is deterministic. The
/// presented group is unchanged up to isomorphism.
pub fn simplify_presentation(p: &Presentation) -> Result<Presentation> {
    // Working copy over plain indices; survivors get fresh names at the end.
    let mut arity = p.arity();
    let mut relators: Vec<Word> = p.relators().to_vec();

    loop {
        // Free/cyclic reduction and empty-relator deletion.
        relators = relators
            .iter()
            .map(Word::cyclically_reduce)
            .filter(|r| !r.is_identity())
            .collect();

        // Find (relator, generator) pairs where the generator occurs exactly
        // once in that relator; prefer the shortest relator.
        let mut candidate: Option<(usize, usize)> = None; // (relator idx, position)
        let mut order: Vec<usize> = (0..relators.len()).collect();
        order.sort_by_key(|&i| (relators[i].len(), i));
        'outer: for &ri in &order {
            let mut counts = vec![0usize; arity];
            for l in relators[ri].letters() {
                counts[l.gen] += 1;
            }
            for (pos, l) in relators[ri].letters().iter().enumerate() {
                if counts[l.gen] == 1 {
                    candidate = Some((ri, pos));
                    break 'outer;
                }
            }
        }

        let Some((ri, pos)) = candidate else {
            break;
        };

        // Solve relator = u x^e v = 1 for x and substitute everywhere.
        let relator = relators[ri].clone();
        let letters = relator.letters();
        let x = letters[pos];
        let prefix = Word::reduce(arity, letters[..pos].iter().copied());
        let suffix = Word::reduce(arity, letters[pos + 1..].iter().copied());
        // x^e = prefix⁻¹ · suffix⁻¹
        let value_of_xe = prefix.inverse().concat(&suffix.inverse())?;
        let replacement = if x.inv { value_of_xe.inverse() } else { value_of_xe };

        let mut images: Vec<Word> = (0..arity)
            .map(|g| Word::generator(arity, g).expect("in range"))
            .collect();
        images[x.gen] = replacement;

        relators.remove(ri);
        relators = relators
            .iter()
            .map(|r| r.substitute(&images))
            .collect::<Result<Vec<_>>>()?;

        // Drop the eliminated generator and reindex.
        let removed = x.gen;
        let remap = |g: usize| if g > removed { g - 1 } else { g };
        arity -= 1;
        relators = relators
            .iter()
            .map(|r| {
                Word::reduce(
                    arity,
                    r.letters().iter().map(|l| Letter::new(remap(l.gen), l.inv)),
                )
            })
            .collect();
    }

    // Fresh names x1..xn for the survivors.
    Presentation::new(
        GeneratorSet::fresh(arity),
        relators
            .iter()
            .map(|r| Word::reduce(arity, r.letters().iter().copied()))
            .collect(),
    )
}

/// A finite quotient used as evidence: generator images in a target group,
/// with every relator verified to die.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientWitness {
    pub label: String,
    pub target: FiniteGroup,
    pub images: Vec<usize>,
}

impl QuotientWitness {
    pub fn verify(&self, p: &Presentation) -> Result<()> {
        for relator in p.relators() {
            if self.target.eval_word(relator, &self.images)? != 0 {
                return Err(Error::RelatorViolation {
                    relator: relator.display(p.generators()),
                });
            }
        }
        Ok(())
    }
}

/// Outcome of abelianness certification. Certificates are sound and never
/// complete: `Unknown` is an honest answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianCertificate {
    /// Every pairwise generator commutator was derived from the relators
    /// within budget (or the presentation has at most one generator).
    CertifiedAbelian,
    /// A commutator of two generators with a nontrivial image in a verified
    /// finite quotient.
    CertifiedNonabelianWitness { commutator: Word, witness_label: String },
    Unknown,
}

/// Certifies abelianness of the presented group.
///
/// The abelian path derives each pairwise generator commutator from the
/// relators by a bounded conjugate-insertion search (budget counts expanded
/// words). The nonabelian path requires an explicit finite-quotient witness
/// whose generator images fail to commute; it never guesses.
pub fn certify_abelian(
    p: &Presentation,
    budget: usize,
    witnesses: &[QuotientWitness],
) -> Result<AbelianCertificate> {
    for w in witnesses {
        w.verify(p)?;
    }
    let arity = p.arity();

    // Nonabelian evidence first: sound regardless of derivability.
    for w in witnesses {
        for i in 0..arity {
            for j in (i + 1)..arity {
                let a = w.images[i];
                let b = w.images[j];
                if w.target.mul(a, b) != w.target.mul(b, a) {
                    let gi = Word::generator(arity, i)?;
                    let gj = Word::generator(arity, j)?;
                    return Ok(AbelianCertificate::CertifiedNonabelianWitness {
                        commutator: gi.commutator(&gj)?,
                        witness_label: w.label.clone(),
                    });
                }
            }
        }
    }

    if arity <= 1 {
        return Ok(AbelianCertificate::CertifiedAbelian);
    }

    let mut remaining = budget;
    for i in 0..arity {
        for j in (i + 1)..arity {
            let gi = Word::generator(arity, i)?;
            let gj = Word::generator(arity, j)?;
            let commutator = gi.commutator(&gj)?;
            if !derive_trivial(&commutator, p, &mut remaining) {
                return Ok(AbelianCertificate::Unknown);
            }
        }
    }
    Ok(AbelianCertificate::CertifiedAbelian)
}

/// Bounded search for a derivation of `w = 1` from the relators: breadth-first
/// insertion of cyclic conjugates of relators (and inverses) at every
/// position, keeping freely reduced words below a length cap. The budget
/// counts enqueued candidate words, which bounds memory and time together.
/// Sound: reaching the empty word proves membership in the normal closure.
fn derive_trivial(w: &Word, p: &Presentation, budget: &mut usize) -> bool {
    if w.is_identity() {
        return true;
    }
    let arity = p.arity();
    let mut moves: Vec<Word> = Vec::new();
    for r in p.relators() {
        for rot in r.rotations() {
            if !moves.contains(&rot) {
                moves.push(rot.clone());
            }
            let inv = rot.inverse();
            if !moves.contains(&inv) {
                moves.push(inv);
            }
        }
    }
    if moves.is_empty() {
        return false;
    }
    let max_relator = p.relators().iter().map(Word::len).max().unwrap_or(0);
    // Tight cap: only derivations that keep cancelling stay in play.
    let cap = w.len().max(max_relator) + 2;

    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(current) = queue.pop_front() {
        for m in &moves {
            for cut in 0..=current.len() {
                let head = Word::reduce(arity, current.letters()[..cut].iter().copied());
                let tail = Word::reduce(arity, current.letters()[cut..].iter().copied());
                let Ok(next) = head.concat(m).and_then(|hm| hm.concat(&tail)) else {
                    continue;
                };
                if next.is_identity() {
                    return true;
                }
                if next.len() <= cap && !seen.contains(&next) {
                    if *budget == 0 {
                        return false;
                    }
                    *budget -= 1;
                    seen.insert(next.clone());
                    queue.push_back(next.clone());
                }
            }
        }
    }
    false
}

pub const DEFAULT_TIETZE_BUDGET: usize = 10_000;
