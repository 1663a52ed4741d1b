use proptest::prelude::*;

use tmwords::avoidance::{find_overlap, has_overlap_ending_at_end, is_circular_overlap_free};
use tmwords::complexity::{Branch, DyadicDecomposition};
use tmwords::series::{
    detect_eventual_period, differences, guess_linear_recurrence, SequenceWindow,
};
use tmwords::word::{
    conjugates, paperfolding_letters, thue_morse_prefix, tk_letter, FiniteWord, Morphism,
};

fn word(max_len: usize, alphabet: u8) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(0..alphabet, 0..=max_len)
        .prop_map(move |v| FiniteWord::new(v, alphabet).unwrap())
}

fn nonempty_word(max_len: usize, alphabet: u8) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(0..alphabet, 1..=max_len)
        .prop_map(move |v| FiniteWord::new(v, alphabet).unwrap())
}

fn ternary_morphism() -> impl Strategy<Value = Morphism> {
    prop::collection::vec(nonempty_word(4, 3), 3)
        .prop_map(|images| Morphism::new(images, 3).unwrap())
}

proptest! {
    #[test]
    fn morphisms_distribute_over_concatenation(m in ternary_morphism(), u in word(64, 3), v in word(64, 3)) {
        let lhs = m.apply(&u.concat(&v)).unwrap();
        let rhs = m.apply(&u).unwrap().concat(&m.apply(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn thue_morse_prefixes_are_stable(len in 0usize..4096) {
        let mu = Morphism::thue_morse();
        let short = mu.iterate_prefix(0, len).unwrap();
        let long = mu.iterate_prefix(0, 2 * len).unwrap();
        prop_assert_eq!(&long[..len], &short[..]);
    }

    #[test]
    fn conjugates_are_rotations(w in word(24, 3)) {
        let cs = conjugates(&w);
        prop_assert_eq!(cs.len(), w.len().max(1));
        let mut sorted_w = w.letters().to_vec();
        sorted_w.sort_unstable();
        for (i, c) in cs.iter().enumerate() {
            let mut expected = w.letters()[i..].to_vec();
            expected.extend_from_slice(&w.letters()[..i]);
            prop_assert_eq!(c.letters(), &expected[..]);
            let mut sorted_c = c.letters().to_vec();
            sorted_c.sort_unstable();
            prop_assert_eq!(&sorted_c, &sorted_w);
        }
    }

    #[test]
    fn paperfolding_extends_its_prefix(bits in prop::collection::vec(0u8..2, 1..12), extra in 0u8..2) {
        let short = paperfolding_letters(&bits);
        let mut longer_bits = bits.clone();
        longer_bits.push(extra);
        let long = paperfolding_letters(&longer_bits);
        prop_assert_eq!(&long[..short.len()], &short[..]);
        prop_assert_eq!(long.len(), 2 * short.len() + 1);
    }


    #[test]
    fn circular_freeness_implies_linear(w in word(20, 2)) {
        if is_circular_overlap_free(&w) {
            prop_assert!(find_overlap(&w).is_none());
        }
    }

    #[test]
    fn differences_are_linear(
        a in prop::collection::vec(-1000i64..1000, 4..40),
        seed in any::<u64>(),
        order in 1usize..3,
    ) {
        let b: Vec<i64> = a.iter().enumerate().map(|(i, _)| ((seed >> (i % 32)) & 0xff) as i64 - 128).collect();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let da = differences(&SequenceWindow::new(0, a.clone()).unwrap(), order).unwrap();
        let db = differences(&SequenceWindow::new(0, b).unwrap(), order).unwrap();
        let ds = differences(&SequenceWindow::new(0, sum).unwrap(), order).unwrap();
        let added: Vec<i64> = da.values.iter().zip(&db.values).map(|(x, y)| x + y).collect();
        prop_assert_eq!(ds.values, added);
    }

    #[test]
    fn period_detection_matches_brute_force(
        v in prop::collection::vec(0i64..3, 12..40),
        max_pre in 0usize..4,
        max_per in 1usize..4,
    ) {
        let s = SequenceWindow::new(0, v.clone()).unwrap();
        let got = detect_eventual_period(&s, max_pre, max_per).unwrap();
        let mut expected = None;
        'outer: for pre in 0..=max_pre {
            for per in 1..=max_per {
                let mut ok = true;
                for i in pre..v.len() {
                    if i + per < v.len() && v[i] != v[i + per] {
                        ok = false;
                    }
                }
                if ok {
                    expected = Some((pre, per));
                    break 'outer;
                }
            }
        }
        prop_assert_eq!(got.map(|g| (g.preperiod, g.period)), expected);
    }

    #[test]
    fn recurrence_guesses_verify(v in prop::collection::vec(-50i64..50, 12..30)) {
        let s = SequenceWindow::new(0, v.clone()).unwrap();
        if let Some(g) = guess_linear_recurrence(&s, 4).unwrap() {
            prop_assert!(g.verifies(&v));
        }
    }

    #[test]
    fn generated_recurrences_are_recovered(c1 in -3i64..4, c2 in -3i64..4, a0 in -5i64..6, a1 in -5i64..6) {
        let mut v = vec![a0, a1];
        for n in 2..24 {
            v.push(c1 * v[n - 1] + c2 * v[n - 2]);
        }
        let g = guess_linear_recurrence(&SequenceWindow::new(0, v.clone()).unwrap(), 4).unwrap().unwrap();
        prop_assert!(g.order <= 2);
        prop_assert!(g.verifies(&v));
    }

    #[test]
    fn dyadic_decomposition_round_trips(n in 2u64..=(1 << 20)) {
        let d = DyadicDecomposition::of(n).unwrap();
        prop_assert_eq!(d.reconstruct(), n);
        let half = 1u64 << (d.a - 1);
        prop_assert!(d.b < half);
        let base = 1u64 << d.a;
        match d.branch {
            Branch::Lower => prop_assert!(n < base + half),
            Branch::Upper => prop_assert!(n >= base + half),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn batch_and_incremental_detectors_agree(w in word(96, 3)) {
        let incremental = (1..=w.len()).any(|i| has_overlap_ending_at_end(&w[..i]));
        prop_assert_eq!(find_overlap(&w).is_some(), incremental);
    }
}

#[test]
fn morphic_and_digit_sum_definitions_agree() {
    let t = thue_morse_prefix(1 << 16);
    for (n, &letter) in t.iter().enumerate() {
        assert_eq!(letter, tk_letter(n as u64, 2).unwrap(), "n = {n}");
    }
}

#[test]
fn psi_projection_preserves_overlaps_exhaustively() {
    let psi = Morphism::psi();
    for len in 0..=12u32 {
        for code in 0..3u64.pow(len) {
            let mut c = code;
            let letters: Vec<u8> = (0..len)
                .map(|_| {
                    let l = (c % 3) as u8;
                    c /= 3;
                    l
                })
                .collect();
            if find_overlap(&letters).is_some() {
                assert!(find_overlap(&psi.apply(&letters).unwrap()).is_some());
            }
        }
    }
}

#[test]
fn detectors_agree_exhaustively() {
    for alphabet in [2u64, 3] {
        let max_len = 14;
        for len in 0..=max_len {
            for code in 0..alphabet.pow(len) {
                let mut c = code;
                let w: Vec<u8> = (0..len)
                    .map(|_| {
                        let l = (c % alphabet) as u8;
                        c /= alphabet;
                        l
                    })
                    .collect();
                let incremental = (1..=w.len()).any(|i| has_overlap_ending_at_end(&w[..i]));
                assert_eq!(find_overlap(&w).is_some(), incremental, "{w:?}");
            }
        }
    }
}
