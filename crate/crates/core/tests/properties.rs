use eaqldpc::decoder::{build_tanner, sp_decode};
use eaqldpc::designs::build_sts;
use eaqldpc::eaqecc::{css_from_parity_check, Orientation};
use eaqldpc::field::field_of_order;
use eaqldpc::geometry::{build_geometry, GeometryKind};
use eaqldpc::gf2::{BitMatrix, BitVec};
use eaqldpc::io::{read_alist, read_design, write_alist, write_design};
use eaqldpc::simulator::{sample_error, trial_rng, wilson_interval, ChannelModel, ChannelReading};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..12, 1usize..40).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
            .prop_map(|rows| BitMatrix::from_dense(&rows).unwrap())
    })
}

proptest! {
    #[test]
    fn row_rank_equals_column_rank(h in matrix()) {
        let r = h.rank();
        prop_assert_eq!(r, h.transpose().rank());
        prop_assert!(r <= h.rows().min(h.cols()));
    }

    #[test]
    fn nullspace_is_the_kernel(h in matrix()) {
        let basis = h.nullspace_basis();
        prop_assert_eq!(basis.rows(), h.cols() - h.rank());
        prop_assert_eq!(basis.rank(), basis.rows());
        for i in 0..basis.rows() {
            prop_assert!(h.mul_vec(&basis.row(i)).unwrap().is_zero());
        }
    }

    #[test]
    fn code_parameters_are_consistent(h in matrix()) {
        prop_assume!(!h.is_zero());
        let p = css_from_parity_check(&h, Orientation::PointByBlock).unwrap();
        prop_assert!(p.c <= p.rank_h);
        prop_assert_eq!(p.k, p.n as i64 - 2 * p.rank_h as i64 + p.c as i64);
        prop_assert_eq!((p.n as i64 - p.k + p.c as i64) % 2, 0);
    }

    #[test]
    fn alist_round_trip(h in matrix()) {
        let text = write_alist(&h);
        prop_assert_eq!(read_alist(&text).unwrap(), h);
    }

    #[test]
    fn row_space_membership_of_row_sums(h in matrix(), picks in proptest::collection::vec(any::<bool>(), 12)) {
        let mut x = BitVec::zeros(h.cols());
        for (i, &p) in picks.iter().enumerate().take(h.rows()) {
            if p {
                x.xor_assign(&h.row(i));
            }
        }
        prop_assert!(h.in_row_space(&x).unwrap());
    }

    #[test]
    fn design_file_round_trip(v in (7usize..80).prop_filter("admissible", |v| v % 6 == 1 || v % 6 == 3)) {
        let s = build_sts(v).unwrap();
        let text = write_design(&s);
        let back = read_design(&text).unwrap();
        prop_assert_eq!(write_design(&back), text);
        prop_assert_eq!(back.blocks(), s.blocks());
    }

    #[test]
    fn field_axioms(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32]), a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
        let f = field_of_order(q).unwrap();
        let (a, b, c) = (a % q as u32, b % q as u32, c % q as u32);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn wilson_interval_brackets_the_estimate(trials in 1u64..1_000_000, frac in 0.0f64..=1.0) {
        let errors = ((trials as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(errors, trials, 1.959963984540054);
        let p = errors as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }
}

#[test]
fn decoder_output_matches_the_syndrome_when_converged() {
    let g = build_geometry(GeometryKind::Pg, 2, 8).unwrap();
    let h = g.structure.point_by_block();
    let graph = build_tanner(&h);
    for seed in 0..200u64 {
        let mut rng = trial_rng(seed, 0, 0);
        let channel = ChannelModel::new(0.02).unwrap();
        let (x, _) = sample_error(&channel, h.cols(), &mut rng);
        let s = h.mul_vec(&x).unwrap();
        let out = sp_decode(&graph, &s, 0.04, 100).unwrap();
        if out.converged {
            assert_eq!(h.mul_vec(&out.error_estimate).unwrap(), s);
        }
    }
}

/// Pearson's test of the X/Y/Z/identity frequencies at alpha = 0.001.
fn chi_square(reading: ChannelReading, f_m: f64) -> f64 {
    let channel = ChannelModel::with_reading(f_m, reading).unwrap();
    let p = channel.pauli_probability();
    let (n, draws) = (1000usize, 1000u64);
    let mut counts = [0u64; 4];
    for t in 0..draws {
        let mut rng = trial_rng(7, 0, t);
        let (x, z) = sample_error(&channel, n, &mut rng);
        for i in 0..n {
            counts[match (x.get(i), z.get(i)) {
                (false, false) => 0,
                (true, false) => 1,
                (true, true) => 2,
                (false, true) => 3,
            }] += 1;
        }
    }
    let total = (n as u64 * draws) as f64;
    let expected = [1.0 - 3.0 * p, p, p, p].map(|e| e * total);
    counts
        .iter()
        .zip(expected)
        .map(|(&o, e)| (o as f64 - e).powi(2) / e)
        .sum()
}

#[test]
fn sampled_paulis_follow_the_channel() {
    // chi-square with 3 degrees of freedom, upper 0.001 quantile
    const CRITICAL: f64 = 16.266;
    for (reading, f_m) in [
        (ChannelReading::PerPauli, 0.02),
        (ChannelReading::PerPauli, 0.1),
        (ChannelReading::Depolarizing, 0.05),
    ] {
        let stat = chi_square(reading, f_m);
        assert!(stat < CRITICAL, "{reading} f_m={f_m}: chi-square {stat}");
    }
}
