//! Randomized invariant checks across the pipeline.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use lexdrift::corpus::write_jsonl;
use lexdrift::{
    bin_stats, build_group, calibrate, change_rates, count_frequencies, estimate_eta,
    frequency_ratio, group_frequency, ingest_jsonl, parse_vtt, rank_words, shifted_group,
    strip_latex_artifacts, sweep_ratios, target_zscore, Corpus, CorpusFilter, Document,
    EstimationInputs, FrequencyTable, Kind, Ranking, TokenRules, Track,
};

fn word() -> impl Strategy<Value = String> {
    "[a-z]{1,8}"
}

fn counts_map(max_len: usize) -> impl Strategy<Value = BTreeMap<String, f64>> {
    prop::collection::btree_map(word(), 0.0f64..500.0, 0..max_len)
}

fn table() -> impl Strategy<Value = FrequencyTable> {
    counts_map(15).prop_map(|m| FrequencyTable::from_counts(m).unwrap())
}

/// Words with strictly descending, well-separated counts: rank order is
/// unambiguous and survives any positive rescaling.
fn ranked_table(min_words: usize, max_words: usize) -> impl Strategy<Value = FrequencyTable> {
    prop::collection::btree_set(word(), min_words..=max_words).prop_map(|words| {
        let n = words.len();
        let pairs: Vec<(String, f64)> = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, (10 * (n - i)) as f64))
            .collect();
        let borrowed: Vec<(&str, f64)> = pairs.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        FrequencyTable::from_pairs(&borrowed).unwrap()
    })
}

fn tables_close(a: &FrequencyTable, b: &FrequencyTable, tol: f64) -> bool {
    let words: BTreeSet<&String> = a.counts().keys().chain(b.counts().keys()).collect();
    let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);
    words.into_iter().all(|w| close(a.get(w), b.get(w))) && close(a.total(), b.total())
}

fn track_of(i: usize) -> Track {
    [Track::Oral, Track::Spotlight, Track::Poster, Track::Reject][i % 4]
}

fn documents(max: usize) -> impl Strategy<Value = Vec<Document>> {
    prop::collection::vec(("[a-z ]{0,40}", 2019i32..2026), 0..max).prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(i, (text, year))| {
                Document::new(
                    format!("doc{i}"),
                    if i % 2 == 0 { "ICLR" } else { "NeurIPS" },
                    year,
                    track_of(i),
                    Kind::Abstract,
                    text,
                )
                .unwrap()
            })
            .collect()
    })
}

proptest! {
    // Frequency tables form a commutative monoid under merge.
    #[test]
    fn merge_commutes_and_associates(a in table(), b in table(), c in table()) {
        let ab = FrequencyTable::merge(&[a.clone(), b.clone()]);
        let ba = FrequencyTable::merge(&[b.clone(), a.clone()]);
        prop_assert!(tables_close(&ab, &ba, 1e-9));

        let ab_c = FrequencyTable::merge(&[ab, c.clone()]);
        let a_bc = FrequencyTable::merge(&[a.clone(), FrequencyTable::merge(&[b, c])]);
        prop_assert!(tables_close(&ab_c, &a_bc, 1e-9));

        let with_empty = FrequencyTable::merge(&[a.clone(), FrequencyTable::new()]);
        prop_assert!(tables_close(&with_empty, &a, 1e-9));
    }

    #[test]
    fn normalize_preserves_count_ratios(t in ranked_table(2, 15), reference in 1e-3f64..1e9) {
        let n = t.normalize_to_total(reference).unwrap();
        prop_assert!((n.total() - reference).abs() <= 1e-9 * reference);
        let words: Vec<&String> = t.counts().keys().collect();
        for pair in words.windows(2) {
            let before = t.get(pair[0]) / t.get(pair[1]);
            let after = n.get(pair[0]) / n.get(pair[1]);
            prop_assert!((before - after).abs() <= 1e-12 * before.abs());
        }
    }

    #[test]
    fn ranking_invariant_under_normalization(t in ranked_table(1, 20), reference in 1e-3f64..1e9) {
        let before: Vec<String> = rank_words(&t).iter().map(|(w, _)| w.to_string()).collect();
        let after: Vec<String> = rank_words(&t.normalize_to_total(reference).unwrap())
            .iter()
            .map(|(w, _)| w.to_string())
            .collect();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn counting_splits_over_disjoint_corpora(docs in documents(12), split in 0usize..12) {
        let rules = TokenRules::default();
        let split = split.min(docs.len());
        let (left, right) = docs.split_at(split);
        let whole = Corpus::new("w", docs.clone()).unwrap();
        let a = Corpus::new("a", left.to_vec()).unwrap();
        let b = Corpus::new("b", right.to_vec()).unwrap();
        let direct = count_frequencies(&whole, &rules);
        let merged = FrequencyTable::merge(&[
            count_frequencies(&a, &rules),
            count_frequencies(&b, &rules),
        ]);
        // Occurrence counts are small integers; sums are exact.
        prop_assert_eq!(direct, merged);
    }

    #[test]
    fn table_csv_roundtrips(t in table()) {
        let mut buf = Vec::new();
        t.to_csv(&mut buf).unwrap();
        let back = FrequencyTable::from_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn ranking_tsv_roundtrips(t in ranked_table(0, 20)) {
        let r = rank_words(&t);
        let mut buf = Vec::new();
        r.to_tsv(&mut buf).unwrap();
        let back = Ranking::from_tsv(buf.as_slice(), "ranking").unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn jsonl_roundtrips(docs in documents(10)) {
        let corpus = Corpus::new("c", docs).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&corpus, &mut buf).unwrap();
        let back = ingest_jsonl(buf.as_slice(), "c").unwrap();
        prop_assert_eq!(back.documents(), corpus.documents());
    }

    #[test]
    fn select_is_idempotent_and_monotone(
        docs in documents(12),
        years in prop::collection::btree_set(2019i32..2026, 0..3),
        tracks in prop::collection::btree_set(0usize..4, 0..2),
    ) {
        let corpus = Corpus::new("c", docs).unwrap();
        let filter = CorpusFilter {
            years: if years.is_empty() { None } else { Some(years) },
            tracks: if tracks.is_empty() {
                None
            } else {
                Some(tracks.into_iter().map(track_of).collect())
            },
            ..Default::default()
        };
        let once = corpus.select(&filter);
        let twice = once.select(&filter);
        prop_assert_eq!(once.documents(), twice.documents());
        prop_assert!(once.len() <= corpus.len());
        for doc in once.documents() {
            prop_assert!(filter.matches(doc));
        }
    }

    #[test]
    fn latex_stripping_never_grows_text(text in "[a-zA-Z \\\\{}]{0,60}") {
        let out = strip_latex_artifacts(&text);
        prop_assert!(out.text.len() <= text.len());
        if !text.contains('\\') {
            prop_assert_eq!(&out.text, &text);
            prop_assert!(out.warnings.is_empty());
        }
        if out.warnings.is_empty() {
            let again = strip_latex_artifacts(&out.text);
            prop_assert!(again.warnings.is_empty());
            prop_assert_eq!(again.text, out.text);
        } else {
            prop_assert_eq!(&out.text, &text);
        }
    }

    #[test]
    fn vtt_payloads_reparse_to_same_transcript(payloads in prop::collection::vec("[a-zA-Z ]{0,30}", 0..8)) {
        let mut source = String::from("WEBVTT\n\n");
        for (i, payload) in payloads.iter().enumerate() {
            source.push_str(&format!("00:00:{i:02}.000 --> 00:00:{i:02}.900\n{payload}\n\n"));
        }
        let transcript = parse_vtt(source.as_bytes()).unwrap();
        let single_cue = format!("WEBVTT\n\n00:00:00.000 --> 00:00:01.000\n{transcript}\n");
        prop_assert_eq!(parse_vtt(single_cue.as_bytes()).unwrap(), transcript);
    }

    // Control-group identities.
    #[test]
    fn self_ratio_is_one_for_all_shifts(
        t in ranked_table(4, 20),
        pick in prop::collection::vec(0usize..20, 1..4),
        span in 0i64..6,
    ) {
        let ranking = rank_words(&t);
        let words: Vec<&str> = pick
            .iter()
            .map(|&i| ranking.word_at(1 + i % ranking.len()).unwrap())
            .collect();
        let target = build_group(&words, &ranking).unwrap();
        let sweep = sweep_ratios(&target, -span, span, &ranking, &t, &t).unwrap();
        for point in &sweep.points {
            prop_assert_eq!(point.ratio, 1.0);
        }
    }

    #[test]
    fn swapped_tables_give_reciprocal_ratios(
        base in ranked_table(4, 12),
        seed_counts in prop::collection::vec(1.0f64..400.0, 12),
        span in 0i64..5,
    ) {
        let ranking = rank_words(&base);
        // A second table over the same words, all positive.
        let pairs: Vec<(&str, f64)> = ranking
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w, seed_counts[i % seed_counts.len()]))
            .collect();
        let other = FrequencyTable::from_pairs(&pairs).unwrap();

        let target = build_group(&[ranking.word_at(1).unwrap()], &ranking).unwrap();
        let forward = sweep_ratios(&target, -span, span, &ranking, &base, &other).unwrap();
        let backward = sweep_ratios(&target, -span, span, &ranking, &other, &base).unwrap();
        prop_assert_eq!(forward.points.len(), backward.points.len());
        for (f, b) in forward.points.iter().zip(&backward.points) {
            prop_assert_eq!(f.shift, b.shift);
            prop_assert!((f.ratio * b.ratio - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn group_frequency_is_linear_in_the_table(
        t1 in table(),
        t2 in table(),
        group_words in prop::collection::btree_set(word(), 1..6),
    ) {
        // Build a group over arbitrary words via a ranking containing them.
        let pairs: Vec<(String, f64)> = group_words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), (10 * (group_words.len() - i)) as f64))
            .collect();
        let borrowed: Vec<(&str, f64)> = pairs.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        let ranking = rank_words(&FrequencyTable::from_pairs(&borrowed).unwrap());
        let words: Vec<&String> = group_words.iter().collect();
        let group = build_group(&words, &ranking).unwrap();

        let merged = FrequencyTable::merge(&[t1.clone(), t2.clone()]);
        let lhs = group_frequency(&group, &merged);
        let rhs = group_frequency(&group, &t1) + group_frequency(&group, &t2);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn sweep_matches_naive_recomputation(
        t in ranked_table(3, 20),
        other_counts in prop::collection::vec(0.5f64..300.0, 20),
        picks in prop::collection::btree_set(0usize..20, 1..4),
        span in 0i64..25,
    ) {
        let ranking = rank_words(&t);
        let pairs: Vec<(&str, f64)> = ranking
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w, other_counts[i % other_counts.len()]))
            .collect();
        let other = FrequencyTable::from_pairs(&pairs).unwrap();
        let words: Vec<&str> = picks
            .iter()
            .map(|&i| ranking.word_at(1 + i % ranking.len()).unwrap())
            .collect();
        let target = build_group(&words, &ranking).unwrap();

        let sweep = sweep_ratios(&target, -span, span, &ranking, &t, &other).unwrap();

        // Naive per-shift recomputation, word by word.
        let mut expected_points = Vec::new();
        let mut expected_skips = Vec::new();
        'shifts: for n in -span..=span {
            let mut freq_s = 0.0;
            let mut freq_sp = 0.0;
            for &rank in target.indices() {
                let shifted = rank as i64 + n;
                if shifted < 1 || shifted > ranking.len() as i64 {
                    expected_skips.push(n);
                    continue 'shifts;
                }
                let w = ranking.word_at(shifted as usize).unwrap();
                freq_s += t.get(w);
                freq_sp += other.get(w);
            }
            if freq_sp == 0.0 {
                expected_skips.push(n);
                continue;
            }
            expected_points.push((n, freq_s, freq_sp, freq_s / freq_sp));
        }

        prop_assert_eq!(sweep.points.len(), expected_points.len());
        for (p, (n, fs, fsp, ratio)) in sweep.points.iter().zip(&expected_points) {
            prop_assert_eq!(p.shift, *n);
            prop_assert_eq!(p.group_freq_s, *fs);
            prop_assert_eq!(p.group_freq_sprime, *fsp);
            prop_assert_eq!(p.ratio, *ratio);
        }
        let skips: Vec<i64> = sweep.skipped.iter().map(|s| s.shift).collect();
        prop_assert_eq!(skips, expected_skips);
    }

    #[test]
    fn zscore_invariant_under_table_rescaling(
        t in ranked_table(12, 20),
        other_counts in prop::collection::vec(1.0f64..300.0, 20),
        c_s in 0.1f64..10.0,
        c_sp in 0.1f64..10.0,
    ) {
        let ranking = rank_words(&t);
        let pairs: Vec<(&str, f64)> = ranking
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w, other_counts[i % other_counts.len()]))
            .collect();
        let other = FrequencyTable::from_pairs(&pairs).unwrap();
        let mid = ranking.len() / 2;
        let target = build_group(&[ranking.word_at(mid).unwrap()], &ranking).unwrap();
        let span = (mid - 1) as i64;

        let z = |s: &FrequencyTable, sp: &FrequencyTable| -> Option<f64> {
            let sweep = sweep_ratios(&target, -span, span, &ranking, s, sp).ok()?;
            let bins = bin_stats(&sweep.points, 3).ok()?;
            target_zscore(&sweep.points, &bins).ok()
        };

        let plain = z(&t, &other);
        let scaled = z(
            &t.normalize_to_total(t.total() * c_s).unwrap(),
            &other.normalize_to_total(other.total() * c_sp).unwrap(),
        );
        match (plain, scaled) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0)),
            (None, None) => {}
            other => prop_assert!(false, "one side failed: {other:?}"),
        }
    }

    // Change-rate identities.
    #[test]
    fn change_rates_satisfy_their_identity(s1 in ranked_table(1, 10), s2 in table()) {
        let rates = change_rates(&s1, &s2);
        for (w, &r) in rates.rates().iter() {
            prop_assert!(r >= -1.0);
            let (f1, f2) = rates.support(w).unwrap();
            prop_assert!((f2 - f1 * (1.0 + r)).abs() <= 1e-12 * f2.abs().max(1.0));
        }
        for w in rates.excluded() {
            prop_assert!(s1.get(w) == 0.0 && s2.get(w) > 0.0);
        }
    }

    #[test]
    fn change_rates_invariant_under_common_rescaling(
        s1 in ranked_table(1, 10),
        s2 in ranked_table(1, 10),
        c in 0.01f64..100.0,
    ) {
        let plain = change_rates(&s1, &s2);
        let scaled = change_rates(
            &s1.normalize_to_total(s1.total() * c).unwrap(),
            &s2.normalize_to_total(s2.total() * c).unwrap(),
        );
        for (w, &r) in plain.rates().iter() {
            let rs = scaled.get(w).unwrap();
            prop_assert!((rs - r).abs() <= 1e-9 * r.abs().max(1.0));
        }
    }

    // Estimator identities.
    #[test]
    fn planted_mixture_recovered(
        f_star_counts in prop::collection::vec(5.0f64..200.0, 2..10),
        rate_values in prop::collection::vec(0.1f64..1.5, 10),
        eta in 0.01f64..1.0,
    ) {
        let n = f_star_counts.len();
        let words: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let f_star: Vec<(&str, f64)> = words
            .iter()
            .zip(&f_star_counts)
            .map(|(w, c)| (w.as_str(), *c))
            .collect();
        let s1: Vec<(&str, f64)> = words.iter().map(|w| (w.as_str(), 8.0)).collect();
        let s2: Vec<(&str, f64)> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), 8.0 * (1.0 + rate_values[i % rate_values.len()])))
            .collect();
        let rates = change_rates(
            &FrequencyTable::from_pairs(&s1).unwrap(),
            &FrequencyTable::from_pairs(&s2).unwrap(),
        );

        let f_d: Vec<(String, f64)> = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let r = rates.get(w).unwrap();
                (w.clone(), f_star_counts[i] * (1.0 + eta * r))
            })
            .collect();
        let total_star: f64 = f_star_counts.iter().sum();
        let total_d: f64 = f_d.iter().map(|(_, c)| c).sum();
        let mut f_star = f_star;
        let filler = total_d - total_star;
        f_star.push(("zfiller", filler));

        let f_d_pairs: Vec<(&str, f64)> = f_d.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        let inputs = EstimationInputs::new(
            FrequencyTable::from_pairs(&f_d_pairs).unwrap(),
            FrequencyTable::from_pairs(&f_star).unwrap(),
            rates,
        )
        .unwrap();
        let word_set: BTreeSet<String> = words.iter().cloned().collect();
        let (eta_hat, residuals) = estimate_eta(&inputs, &word_set).unwrap();
        prop_assert!((eta_hat - eta).abs() <= 1e-10 * eta.max(1.0), "eta_hat={eta_hat} eta={eta}");
        for &d in residuals.values() {
            prop_assert!(d.abs() <= 1e-9);
        }
    }

    #[test]
    fn estimator_scale_equivariant(
        f_star_counts in prop::collection::vec(5.0f64..200.0, 2..8),
        deviations in prop::collection::vec(-3.0f64..3.0, 8),
        c in 0.1f64..50.0,
    ) {
        let n = f_star_counts.len();
        let words: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let s1: Vec<(&str, f64)> = words.iter().map(|w| (w.as_str(), 8.0)).collect();
        let s2: Vec<(&str, f64)> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), 8.0 + (i + 1) as f64))
            .collect();
        let rates = change_rates(
            &FrequencyTable::from_pairs(&s1).unwrap(),
            &FrequencyTable::from_pairs(&s2).unwrap(),
        );

        let build = |scale: f64| -> EstimationInputs {
            let f_star: Vec<(String, f64)> = words
                .iter()
                .zip(&f_star_counts)
                .map(|(w, c0)| (w.clone(), c0 * scale))
                .collect();
            let f_d: Vec<(String, f64)> = words
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let base = f_star_counts[i] * scale;
                    (w.clone(), (base + deviations[i % deviations.len()] * scale).max(0.0))
                })
                .collect();
            let ts: f64 = f_star.iter().map(|(_, c)| c).sum();
            let td: f64 = f_d.iter().map(|(_, c)| c).sum();
            let mut f_star = f_star;
            let mut f_d = f_d;
            if td > ts {
                f_star.push(("zfiller".to_string(), td - ts));
            } else {
                f_d.push(("zfiller".to_string(), ts - td));
            }
            let fs: Vec<(&str, f64)> = f_star.iter().map(|(w, c)| (w.as_str(), *c)).collect();
            let fd: Vec<(&str, f64)> = f_d.iter().map(|(w, c)| (w.as_str(), *c)).collect();
            EstimationInputs::new(
                FrequencyTable::from_pairs(&fd).unwrap(),
                FrequencyTable::from_pairs(&fs).unwrap(),
                rates.clone(),
            )
            .unwrap()
        };

        let word_set: BTreeSet<String> = words.iter().cloned().collect();
        let (eta1, _) = estimate_eta(&build(1.0), &word_set).unwrap();
        let (eta2, _) = estimate_eta(&build(c), &word_set).unwrap();
        prop_assert!((eta1 - eta2).abs() <= 1e-9 * eta1.abs().max(1.0));
    }

    #[test]
    fn calibration_preserves_differences(
        values in prop::collection::vec(-2.0f64..2.0, 3..8),
        baseline_picks in prop::collection::btree_set(0usize..8, 1..3),
    ) {
        let series: BTreeMap<i32, f64> = values
            .iter()
            .enumerate()
            .map(|(i, v)| (2018 + i as i32, *v))
            .collect();
        let baseline: BTreeSet<i32> = baseline_picks
            .iter()
            .map(|&i| 2018 + (i % values.len()) as i32)
            .collect();
        let out = calibrate(&series, &baseline).unwrap();

        let base_mean: f64 =
            baseline.iter().map(|y| out.calibrated[y]).sum::<f64>() / baseline.len() as f64;
        prop_assert!(base_mean.abs() <= 1e-12);

        let years: Vec<i32> = series.keys().copied().collect();
        for pair in years.windows(2) {
            let raw_diff = series[&pair[1]] - series[&pair[0]];
            let cal_diff = out.calibrated[&pair[1]] - out.calibrated[&pair[0]];
            prop_assert!((raw_diff - cal_diff).abs() <= 1e-12);
        }
    }

    // Shifting by n then -n returns to the original group.
    #[test]
    fn shift_roundtrip_is_identity(t in ranked_table(6, 20), n in 1i64..6) {
        let ranking = rank_words(&t);
        let mid = (ranking.len() / 2).max(1);
        let target = build_group(&[ranking.word_at(mid).unwrap()], &ranking).unwrap();
        if let Ok(there) = shifted_group(&target, n, &ranking) {
            let back = shifted_group(&there, -n, &ranking).unwrap();
            prop_assert_eq!(back, target);
        }
    }

    #[test]
    fn ratio_identity_on_identical_tables(t in ranked_table(2, 10)) {
        let ranking = rank_words(&t);
        let group = build_group(&[ranking.word_at(1).unwrap()], &ranking).unwrap();
        prop_assert_eq!(frequency_ratio(&group, &t, &t).unwrap(), 1.0);
    }
}
