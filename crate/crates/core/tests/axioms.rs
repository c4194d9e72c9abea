//! Property tests for the word substrate and the coset action.

use proptest::prelude::*;

use solenoid_core::coset::{CosetTable, SubgroupSpec};
use solenoid_core::rng::SplitMix64;
use solenoid_core::words::{Letter, Presentation, Word};

const ARITY: usize = 3;

fn letter_strategy(arity: usize) -> impl Strategy<Value = Letter> {
    (0..arity, any::<bool>()).prop_map(|(gen, inv)| Letter::new(gen, inv))
}

fn word_strategy(arity: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter_strategy(arity), 0..24)
        .prop_map(move |raw| Word::reduce(arity, raw))
}

/// Reduces by cancelling one randomly chosen adjacent inverse pair at a time.
fn reduce_in_random_order(arity: usize, raw: &[Letter], rng: &mut SplitMix64) -> Word {
    let mut letters: Vec<Letter> = raw.to_vec();
    loop {
        let cancelable: Vec<usize> = (0..letters.len().saturating_sub(1))
            .filter(|&i| {
                letters[i].gen == letters[i + 1].gen && letters[i].inv != letters[i + 1].inv
            })
            .collect();
        if cancelable.is_empty() {
            return Word::reduce(arity, letters);
        }
        let pick = cancelable[rng.below(cancelable.len())];
        letters.drain(pick..pick + 2);
    }
}

#[test]
fn free_reduction_is_confluent() {
    // Any order of cancellations reaches the same reduced word.
    let mut rng = SplitMix64::new(0xc0ffee);
    for _ in 0..10_000 {
        let len = rng.below(65);
        let raw: Vec<Letter> = (0..len)
            .map(|_| Letter::new(rng.below(ARITY), rng.next_u64().is_multiple_of(2)))
            .collect();
        let canonical = Word::reduce(ARITY, raw.iter().copied());
        let randomized = reduce_in_random_order(ARITY, &raw, &mut rng);
        assert_eq!(canonical, randomized);
    }
}

proptest! {
    #[test]
    fn concat_is_associative(u in word_strategy(ARITY), v in word_strategy(ARITY), w in word_strategy(ARITY)) {
        let left = u.concat(&v).unwrap().concat(&w).unwrap();
        let right = u.concat(&v.concat(&w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_and_inverse_laws(u in word_strategy(ARITY)) {
        let e = Word::identity(ARITY);
        prop_assert_eq!(u.concat(&e).unwrap(), u.clone());
        prop_assert_eq!(e.concat(&u).unwrap(), u.clone());
        prop_assert!(u.concat(&u.inverse()).unwrap().is_identity());
        prop_assert!(u.inverse().concat(&u).unwrap().is_identity());
    }

    #[test]
    fn substitution_respects_composition(
        u in word_strategy(2),
        f in prop::collection::vec(word_strategy(ARITY), 2..=2),
        g in prop::collection::vec(word_strategy(2), ARITY..=ARITY),
    ) {
        // substitute(substitute(u, f), g) = substitute(u, g∘f).
        let two_step = u.substitute(&f).unwrap().substitute(&g).unwrap();
        let composed: Vec<Word> = f.iter().map(|w| w.substitute(&g).unwrap()).collect();
        let one_step = u.substitute(&composed).unwrap();
        prop_assert_eq!(two_step, one_step);
    }

    #[test]
    fn substitution_is_homomorphic(
        u in word_strategy(2),
        v in word_strategy(2),
        images in prop::collection::vec(word_strategy(ARITY), 2..=2),
    ) {
        let lhs = u.concat(&v).unwrap().substitute(&images).unwrap();
        let rhs = u
            .substitute(&images)
            .unwrap()
            .concat(&v.substitute(&images).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn s3_by_x_table() -> CosetTable {
    let p = Presentation::parse(["x", "y"], &["x x", "y y y", "x y x y"]).unwrap();
    let h = SubgroupSpec::new(vec![p.parse_word("x").unwrap()]);
    CosetTable::enumerate(&p, &h, 1_000).unwrap()
}

proptest! {
    #[test]
    fn trace_is_a_right_action(
        u_raw in prop::collection::vec(letter_strategy(2), 0..16),
        v_raw in prop::collection::vec(letter_strategy(2), 0..16),
        start in 0..3usize,
    ) {
        let table = s3_by_x_table();
        let u = Word::reduce(2, u_raw);
        let v = Word::reduce(2, v_raw);
        let uv = u.concat(&v).unwrap();
        let two_hops = table.trace(table.trace(start, &u).unwrap(), &v).unwrap();
        prop_assert_eq!(table.trace(start, &uv).unwrap(), two_hops);
    }
}
