mod support;

use proptest::prelude::*;
use tasc::model::{ClockConstraint, Rel};
use tasc::regions::{pretty, zmap, Partition, RegionSet};

use support::*;

#[test]
fn partition_is_sound() {
    for (i, p) in partitions().iter().enumerate() {
        let samples = if p.clocks().len() == 3 && p.len() > 5000 { 20_000 } else { 100_000 };
        assert_eq!(partition_soundness(p, samples, 11 + i as u64), 0, "{:?}", p.ceiling());
    }
}

#[test]
fn regions_decide_constraints() {
    for (i, p) in partitions().iter().enumerate() {
        assert_eq!(region_invariance(p, 2_000, 23 + i as u64), 0, "{:?}", p.ceiling());
    }
}

#[test]
fn successor_matches_delays() {
    for (i, p) in partitions().iter().enumerate() {
        assert_eq!(successor_coherence(p, 5_000, 31 + i as u64), 0, "{:?}", p.ceiling());
    }
}

#[test]
fn set_operations_obey_the_laws() {
    for (i, p) in partitions().iter().enumerate().take(4) {
        assert_eq!(set_laws(p, 200, 41 + i as u64), 0, "{:?}", p.ceiling());
    }
}

#[test]
fn pretty_round_trips() {
    for (i, p) in partitions().iter().enumerate().take(4) {
        assert_eq!(pretty_roundtrip(p, 1_000, 53 + i as u64), 0, "{:?}", p.ceiling());
    }
}

#[test]
fn one_clock_region_count() {
    for k in 0..6u32 {
        let p = Partition::new(&ceiling(&[("x", k)]));
        assert_eq!(p.len(), 2 * k as usize + 2);
    }
}

fn atom() -> impl Strategy<Value = ClockConstraint> {
    let rel = prop_oneof![Just(Rel::Lt), Just(Rel::Eq), Just(Rel::Gt)];
    prop_oneof![
        (prop_oneof![Just("x"), Just("y")], rel.clone(), 0u32..=2)
            .prop_map(|(c, r, n)| ClockConstraint::atom(c, r, n.min(if c == "y" { 1 } else { 2 }))),
        (rel, 0u32..=1).prop_map(|(r, n)| ClockConstraint::diff("x", "y", r, n)),
    ]
}

fn formula() -> impl Strategy<Value = ClockConstraint> {
    atom().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn z_is_a_homomorphism(a in formula(), b in formula()) {
        let p = Partition::new(&ceiling(&[("x", 2), ("y", 1)]));
        let (za, zb) = (zmap(&p, &a).unwrap(), zmap(&p, &b).unwrap());
        prop_assert_eq!(zmap(&p, &a.clone().and(b.clone())).unwrap(), &za & &zb);
        prop_assert_eq!(zmap(&p, &a.or(b)).unwrap(), &za | &zb);
    }

    #[test]
    fn de_morgan_and_distributivity(
        a in proptest::collection::vec(any::<bool>(), 36),
        b in proptest::collection::vec(any::<bool>(), 36),
        c in proptest::collection::vec(any::<bool>(), 36),
    ) {
        let p = Partition::new(&ceiling(&[("x", 2), ("y", 1)]));
        let set = |bits: &[bool]| RegionSet::from_indices(&p, (0..p.len()).filter(|&i| bits[i % bits.len()]));
        let (a, b, c) = (set(&a), set(&b), set(&c));
        prop_assert_eq!((&a & &b).neg(), &a.neg() | &b.neg());
        prop_assert_eq!((&a | &b).neg(), &a.neg() & &b.neg());
        prop_assert_eq!(&a & &(&b | &c), &(&a & &b) | &(&a & &c));
        prop_assert_eq!(&a - &b, &a & &b.neg());
    }

    #[test]
    fn pretty_describes_z(f in formula()) {
        let p = Partition::new(&ceiling(&[("x", 2), ("y", 1)]));
        let z = zmap(&p, &f).unwrap();
        prop_assert_eq!(zmap(&p, &pretty(&z)).unwrap(), z);
    }
}
