use super::*;
use crate::filterbank::daubechies_filter;
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

// Whole-array causal convolution with explicit constant-end extension.
fn oracle_filter(parent: &[f64], taps: &[f64], spacing: usize) -> Vec<f64> {
    let w = taps.len() as isize;
    (1..=parent.len() as isize)
        .map(|t| {
            taps.iter()
                .enumerate()
                .map(|(n, tap)| {
                    let idx = t - spacing as isize * (w - 1 - n as isize);
                    let idx = if idx < 1 { 1 } else { idx };
                    tap * parent[idx as usize - 1]
                })
                .sum()
        })
        .collect()
}

fn oracle_ndwt(y: &[f64], f: &FilterPair, levels: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut parent = y.to_vec();
    let mut out = Vec::new();
    for level in 1..=levels {
        let s = 1 << (level - 1);
        let d = oracle_filter(&parent, f.high_pass(), s);
        let c = oracle_filter(&parent, f.low_pass(), s);
        out.push((d, c.clone()));
        parent = c;
    }
    out
}

fn ndwt(number: u32, levels: usize) -> TransformConfig {
    TransformConfig::new(daubechies_filter(number).unwrap(), levels, Mode::Ndwt).unwrap()
}

fn nwpt(number: u32, levels: usize) -> TransformConfig {
    TransformConfig::new(daubechies_filter(number).unwrap(), levels, Mode::Nwpt).unwrap()
}

fn lcg_series(seed: u64, len: usize) -> Vec<f64> {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..len)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        })
        .collect()
}

#[test]
fn haar_level_one_worked_example() {
    let mut state = TransformState::new(ndwt(1, 1));
    let frames = state.push_block(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    let details = [0.0, -FRAC_1_SQRT_2, -FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
    let smooths = [SQRT_2, 3.0 * FRAC_1_SQRT_2, 5.0 * FRAC_1_SQRT_2, 7.0 * FRAC_1_SQRT_2];
    for (i, frame) in frames.iter().enumerate() {
        assert_eq!(frame.t(), i + 1);
        assert!((frame.detail(1).unwrap() - details[i]).abs() < 1e-15);
        assert!((frame.smooth(1).unwrap() - smooths[i]).abs() < 1e-15);
    }
}

#[test]
fn matches_convolution_oracle() {
    for number in [1, 2, 3, 5, 10] {
        for levels in 1..=4 {
            let y = lcg_series(number as u64 * 31 + levels as u64, 300);
            let coeffs = transform_series(&ndwt(number, levels), &y).unwrap();
            let oracle = oracle_ndwt(&y, &daubechies_filter(number).unwrap(), levels);
            for (level, (d, c)) in oracle.iter().enumerate() {
                let got_d = coeffs.column(NodeId::Detail { level: level + 1 }).unwrap();
                let got_c = coeffs.column(NodeId::Smooth { level: level + 1 }).unwrap();
                for t in 0..y.len() {
                    assert!((got_d[t] - d[t]).abs() < 1e-12);
                    assert!((got_c[t] - c[t]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn constant_input_haar() {
    let mut state = TransformState::new(ndwt(1, 5));
    for _ in 0..50 {
        let frame = state.push(3.0).unwrap();
        for level in 1..=5 {
            assert_eq!(frame.detail(level).unwrap(), 0.0);
            let expected = 2f64.powf(level as f64 / 2.0) * 3.0;
            assert!((frame.smooth(level).unwrap() - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn constant_input_zeroes_every_g_path_packet() {
    for number in [1, 4] {
        let config = nwpt(number, 3);
        let coeffs = transform_series(&config, &[1.7; 64]).unwrap();
        for (node, col) in coeffs.nodes.iter().zip(&coeffs.columns) {
            if let NodeId::Packet { index, .. } = node {
                if *index != 0 {
                    assert!(col.iter().all(|v| v.abs() < 1e-12), "{node}");
                }
            }
        }
    }
}

#[test]
fn packet_counts() {
    for levels in 1..=6 {
        let config = nwpt(2, levels);
        assert_eq!(config.nodes().len(), (1 << (levels + 1)) - 2);
        assert_eq!(config.node_count(), config.nodes().len());
    }
    assert_eq!(nwpt(1, 3).nodes().len(), 14);
    assert_eq!(ndwt(1, 3).nodes().len(), 6);
}

#[test]
fn level_one_packets_are_scaled_ndwt() {
    let y = lcg_series(7, 128);
    let a = transform_series(&ndwt(1, 1), &y).unwrap();
    let p = transform_series(&nwpt(1, 1), &y).unwrap();
    let s = a.column(NodeId::Smooth { level: 1 }).unwrap();
    let d = a.column(NodeId::Detail { level: 1 }).unwrap();
    let p0 = p.column(NodeId::Packet { level: 1, index: 0 }).unwrap();
    let p1 = p.column(NodeId::Packet { level: 1, index: 1 }).unwrap();
    for t in 0..y.len() {
        assert!((p0[t] - SQRT_2 * s[t]).abs() < 1e-12);
        assert!((p1[t] - SQRT_2 * d[t]).abs() < 1e-12);
    }
}

#[test]
fn all_low_pass_packet_nests_ndwt_smooth() {
    for number in [1, 2, 6] {
        let y = lcg_series(number as u64, 256);
        let a = transform_series(&ndwt(number, 4), &y).unwrap();
        let p = transform_series(&nwpt(number, 4), &y).unwrap();
        for level in 1..=4 {
            let s = a.column(NodeId::Smooth { level }).unwrap();
            let p0 = p.column(NodeId::Packet { level, index: 0 }).unwrap();
            let scale = SQRT_2.powi(level as i32);
            for t in 0..y.len() {
                assert!((p0[t] / scale - s[t]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn packet_children_follow_heap_order() {
    // Packet (2, 3) is g applied to packet (1, 1), both scaled by sqrt(2).
    let y = lcg_series(3, 64);
    let f = daubechies_filter(2).unwrap();
    let p = transform_series(&nwpt(2, 2), &y).unwrap();
    let parent = p.column(NodeId::Packet { level: 1, index: 1 }).unwrap();
    let expected: Vec<f64> = oracle_filter(parent, f.high_pass(), 2)
        .into_iter()
        .map(|v| v * SQRT_2)
        .collect();
    let got = p.column(NodeId::Packet { level: 2, index: 3 }).unwrap();
    for t in 0..y.len() {
        assert!((got[t] - expected[t]).abs() < 1e-12);
    }
}

#[test]
fn non_finite_push_leaves_state_unchanged() {
    let mut state = TransformState::new(ndwt(2, 3));
    state.push_block(&[1.0, 2.0, 3.0]).unwrap();
    let mut clone = state.clone();
    assert!(matches!(state.push(f64::NAN), Err(Error::NonFinite { .. })));
    assert!(state.push(f64::INFINITY).is_err());
    assert_eq!(state.t(), 3);
    assert_eq!(state.push(4.0).unwrap(), clone.push(4.0).unwrap());
}

#[test]
fn mode_checked_push() {
    let mut a = TransformState::new(ndwt(1, 2));
    assert!(nwpt_push(&mut a, 1.0).is_err());
    assert!(ndwt_push(&mut a, 1.0).is_ok());
    let mut b = TransformState::new(nwpt(1, 2));
    assert!(ndwt_push(&mut b, 1.0).is_err());
    assert!(nwpt_push(&mut b, 1.0).is_ok());
}

#[test]
fn budget_guard_refuses_large_configs() {
    let f = daubechies_filter(10).unwrap();
    let err = TransformConfig::with_budget(f.clone(), 10, Mode::Nwpt, 1000).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { budget: 1000, .. }));
    assert!(TransformConfig::new(f, 0, Mode::Ndwt).is_err());
}

#[test]
fn buffer_capacity_formula() {
    // Input: W; smooth chain levels 1..L-1: (W-1) 2^l + 1; leaf: 1.
    let c = ndwt(2, 3);
    assert_eq!(c.buffer_requirement(), 4 + 7 + 13 + 1);
    let p = nwpt(1, 2);
    assert_eq!(p.buffer_requirement(), 2 + 2 * 3 + 4);
}

#[test]
fn dwt_is_the_even_sublattice() {
    for number in [1, 2] {
        let f = daubechies_filter(number).unwrap();
        let y = lcg_series(number as u64 + 100, 256);
        let levels = 4;
        let pyramid = batch_dwt(&y, &f, levels).unwrap();
        let coeffs = transform_series(&ndwt(number, levels), &y).unwrap();
        let w = f.width();
        for level in 1..=levels {
            let d = coeffs.column(NodeId::Detail { level }).unwrap();
            let c = coeffs.column(NodeId::Smooth { level }).unwrap();
            for (k0, (bd, bc)) in pyramid.detail(level).iter().zip(pyramid.smooth(level)).enumerate() {
                let k = k0 + 1;
                let t = (1 << level) * k;
                // Extension-free once t exceeds the cumulative lookback.
                if t <= (w - 1) * ((1 << level) - 1) {
                    continue;
                }
                assert!((d[t - 1] - bd).abs() < 1e-12);
                assert!((c[t - 1] - bc).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn prepending_the_first_value_changes_nothing() {
    for number in [1, 3] {
        let y = lcg_series(55, 200);
        let mut padded = vec![y[0]; 37];
        padded.extend_from_slice(&y);
        for config in [ndwt(number, 3), nwpt(number, 3)] {
            let a = transform_series(&config, &y).unwrap();
            let b = transform_series(&config, &padded).unwrap();
            for (ca, cb) in a.columns.iter().zip(&b.columns) {
                for t in 0..y.len() {
                    assert!((ca[t] - cb[t + 37]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn burn_in_is_tight() {
    // At t = burn_in the coarsest level still reads an extended value.
    let config = ndwt(2, 3);
    let b = config.burn_in();
    assert_eq!(b, 3 * 7);
    let y = lcg_series(9, 100);
    let a = transform_series(&config, &y).unwrap();
    let s = transform_series(&config, &y[1..]).unwrap();
    let last = config.nodes().len() - 1;
    assert_ne!(a.columns[last][b], s.columns[last][b - 1]);
    for t in b + 1..y.len() {
        assert!((a.columns[last][t - 1 + 1] - s.columns[last][t - 1]).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn streaming_prefix_is_causal(
        y in proptest::collection::vec(-100.0f64..100.0, 2..120),
        cut in 1usize..120,
        number in 1u32..=4,
        nwpt_mode in any::<bool>(),
    ) {
        let config = if nwpt_mode { nwpt(number, 3) } else { ndwt(number, 3) };
        let k = cut.min(y.len());
        let full = TransformState::new(config.clone()).push_block(&y).unwrap();
        let prefix = TransformState::new(config).push_block(&y[..k]).unwrap();
        prop_assert_eq!(&full[..k], &prefix[..]);
    }

    #[test]
    fn shift_equivariance_after_burn_in(
        y in proptest::collection::vec(-10.0f64..10.0, 80..160),
        number in 1u32..=3,
    ) {
        let config = ndwt(number, 2);
        let a = transform_series(&config, &y).unwrap();
        let s = transform_series(&config, &y[1..]).unwrap();
        for (ca, cs) in a.columns.iter().zip(&s.columns) {
            for t in config.burn_in() + 1..y.len() {
                prop_assert!((cs[t - 1] - ca[t]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn every_node_emits_one_value_per_push(len in 1usize..100, levels in 1usize..5) {
        let config = nwpt(2, levels);
        let coeffs = transform_series(&config, &vec![0.5; len]).unwrap();
        prop_assert!(coeffs.columns.iter().all(|c| c.len() == len));
    }
}
