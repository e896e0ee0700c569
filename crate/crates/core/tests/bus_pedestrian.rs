use tasc::cli::parse_model;
use tasc::model::{product_all, ClockConstraint, TimedAutomaton};
use tasc::regions::{zmap, Partition, RegionSet};
use tasc::synthesis::{bsp, nbp, tscs, Options};

fn product() -> TimedAutomaton {
    let parts = parse_model(include_str!("../models/bus_pedestrian.ta")).unwrap();
    product_all(&parts).unwrap()
}

fn c(src: &str) -> ClockConstraint {
    let text = format!("event e; plant P {{ clock x, y; location l: initial invariant {src}; }}");
    parse_model(&text).unwrap()[0].locations[0].invariant.clone()
}

fn z(p: &std::sync::Arc<Partition>, src: &str) -> RegionSet {
    zmap(p, &c(src)).unwrap()
}

const AR0: &str = "a.r.s0";
const AC1: &str = "a.c.s1";
const GC2: &str = "g.c.s2";
const GRB: &str = "g.r.bot";

#[test]
fn product_has_four_locations() {
    let g = product();
    let names: Vec<_> = g.locations.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names.len(), 4);
    for n in [AR0, AC1, GC2, GRB] {
        assert!(names.contains(&n), "{n}");
    }
    assert!(g.location(GC2).unwrap().marked);
    assert!(!g.location(GRB).unwrap().marked);
    let k = g.clock_ceiling();
    assert_eq!((k["x"], k["y"]), (2, 1));
}

#[test]
fn nonblocking_iterates_match_expected() {
    let g = product();
    let (fin, its) = nbp(&g).unwrap();
    let p = fin.sets[0].partition().clone();
    assert_eq!(its.len(), 5, "N0..N4 with N4 = N3");
    let rows_ar0 = ["false", "false", "x = 2 and y >= 1", "x <= 2 and (y >= 1 or x - y <= 1)", "x <= 2 and x - y <= 1"];
    let rows_ac1 = ["false", "x = 2", "x <= 2", "x <= 2", "x <= 2"];
    for (i, it) in its.iter().enumerate() {
        assert_eq!(it.get(AR0).unwrap(), &z(&p, rows_ar0[i]), "N{i}(a,r,0)");
        assert_eq!(it.get(AC1).unwrap(), &z(&p, rows_ac1[i]), "N{i}(a,c,1)");
        assert!(it.get(GC2).unwrap().is_full());
        assert!(it.get(GRB).unwrap().is_empty());
    }
    assert_eq!(its[3], its[4]);
}

#[test]
fn bad_iterates_match_expected() {
    let g = product();
    let (n, _) = nbp(&g).unwrap();
    let (_, its) = bsp(&g, &n).unwrap();
    let p = n.sets[0].partition().clone();
    assert_eq!(its.len(), 3);
    let rows_ar0 = ["x > 2 or x - y > 1", "x >= 2 or x - y > 1", "x >= 2 or x - y > 1"];
    for (j, it) in its.iter().enumerate() {
        assert_eq!(it.get(AR0).unwrap(), &z(&p, rows_ar0[j]), "B{j}(a,r,0)");
        assert_eq!(it.get(AC1).unwrap(), &z(&p, "x > 2"), "B{j}(a,c,1)");
        assert!(it.get(GRB).unwrap().is_full());
        assert!(it.get(GC2).unwrap().is_empty());
    }
}

#[test]
fn supervisor_has_expected_annotations() {
    let g = product();
    let s = tscs(&g, Options::default()).unwrap();
    let sup = s.supervisor.as_ref().expect("defined");
    let p = s.partition.clone();
    let jump = sup.edges.iter().find(|e| e.event == "jump").unwrap();
    assert_eq!(zmap(&p, &jump.guard).unwrap(), z(&p, "y >= 1 and x <= 2"));
    assert_eq!(jump.guard.to_string(), "y >= 1 and x <= 2");
    let inv = &sup.location(AR0).unwrap().invariant;
    assert_eq!(zmap(&p, inv).unwrap(), z(&p, "x < 2 and x - y <= 1"));
    assert_eq!(inv.to_string(), "x < 2 and x - y <= 1");
    assert_eq!(sup.location(AC1).unwrap().invariant.to_string(), "x <= 2");
    let pass: Vec<_> = sup.edges.iter().filter(|e| e.event == "pass").collect();
    assert_eq!(pass.len(), 2);
    assert!(pass.iter().all(|e| e.guard.to_string() == "x = 2"));
}

#[test]
fn without_forcing_the_initial_state_is_bad() {
    let g = product();
    let s = tscs(&g, Options { forcing: false, ..Options::default() }).unwrap();
    assert!(s.is_undefined());
    assert!(s.trace.iter().all(|t| t.outer == 0));
}

#[test]
fn loops_stop_after_one_repetition() {
    let s = tscs(&product(), Options::default()).unwrap();
    let passes: Vec<_> = s.trace.iter().map(|t| (t.outer, t.inner)).collect();
    assert_eq!(passes, [(0, 0), (0, 1), (1, 0)]);
    assert_eq!(s.trace[1].bad, s.trace[2].bad);
    assert_eq!(s.trace[1].nonblocking, s.trace[2].nonblocking);
}

#[test]
fn feeding_back_invariants_also_cuts_the_unreachable_strip() {
    let s = tscs(&product(), Options { invariant_feedback: true, ..Options::default() }).unwrap();
    let p = s.partition.clone();
    let inv = &s.supervisor.as_ref().unwrap().location(AR0).unwrap().invariant;
    assert_eq!(zmap(&p, inv).unwrap(), z(&p, "x < 2 and x - y < 1"));
}
