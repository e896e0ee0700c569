//! Models and seeded law checks shared by the property suites and the
//! acceptance run. Every check returns the number of violations found.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tasc::cli::parse_model;
use tasc::model::{is_subautomaton, merge_ceilings, product_all, sync_product, CeilingMap, ClockConstraint, Rel, TimedAutomaton};
use tasc::oracle::{
    bad_states, check_controllability, check_nonblocking, full_region_automaton, indirect_on, indirect_synthesize,
    nonblocking_states, ra_language_equal, ra_language_included, region_automaton_over,
};
use tasc::regions::{pretty, region_satisfies, zmap, Partition, RegionSet};
use tasc::synthesis::{bsp, nbp, tscs, Options};

pub fn bus_pedestrian() -> TimedAutomaton {
    product_all(&parse_model(include_str!("../../models/bus_pedestrian.ta")).unwrap()).unwrap()
}

pub fn train_gate() -> TimedAutomaton {
    product_all(&parse_model(include_str!("../../models/train_gate.ta")).unwrap()).unwrap()
}

pub fn train_gate_requirements() -> Vec<TimedAutomaton> {
    parse_model(include_str!("../../models/train_gate_requirements.ta")).unwrap()
}

pub fn premature_tau() -> TimedAutomaton {
    parse_model(include_str!("../../models/premature_tau.ta")).unwrap().remove(0)
}

pub fn constraint(clocks: &[&str], src: &str) -> ClockConstraint {
    let text = format!("plant P {{ clock {}; location l: initial invariant {src}; }}", clocks.join(", "));
    parse_model(&text).unwrap()[0].locations[0].invariant.clone()
}

pub fn ceiling(pairs: &[(&str, u32)]) -> CeilingMap {
    pairs.iter().map(|(c, k)| (c.to_string(), *k)).collect()
}

/// The partitions the law checks run over.
pub fn partitions() -> Vec<Arc<Partition>> {
    [
        ceiling(&[]),
        ceiling(&[("x", 2)]),
        ceiling(&[("x", 2), ("y", 1)]),
        ceiling(&[("a", 1), ("b", 2), ("c", 1)]),
        ceiling(&[("x", 5), ("y", 2), ("z", 10)]),
    ]
    .iter()
    .map(Partition::new)
    .collect()
}

/// Region membership written out directly: per clock the integer part and
/// whether it is an integer (or "above the ceiling"), per clock pair the
/// same for the difference on its grid.
pub fn signature(p: &Partition, u: &[Rational64]) -> Vec<(i8, i64, bool)> {
    let band = |v: Rational64, lo: i64, hi: i64| {
        if v < Rational64::from_integer(lo) {
            (-1, 0, false)
        } else if v > Rational64::from_integer(hi) {
            (1, 0, false)
        } else {
            (0, v.floor().to_integer(), v.is_integer())
        }
    };
    let n = p.clocks().len();
    let k = |i: usize| i64::from(p.k(i));
    let mut sig: Vec<_> = (0..n).map(|i| band(u[i], 0, k(i))).collect();
    for i in 0..n {
        for j in i + 1..n {
            sig.push(band(u[j] - u[i], -k(i), k(j)));
        }
    }
    sig
}

pub fn random_valuation(rng: &mut ChaCha8Rng, p: &Partition) -> Vec<Rational64> {
    let top = (0..p.clocks().len()).map(|i| p.k(i)).max().unwrap_or(0) as i64 + 3;
    (0..p.clocks().len())
        .map(|_| {
            let den = rng.gen_range(1..=12);
            Rational64::new(rng.gen_range(0..=top * den), den)
        })
        .collect()
}

fn half_grid(p: &Partition) -> Vec<Vec<Rational64>> {
    let n = p.clocks().len();
    let top = (0..n).map(|i| p.k(i)).max().unwrap_or(0) as i64 + 3;
    let steps: Vec<Rational64> = (0..=2 * top).map(|h| Rational64::new(h, 2)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|u| steps.iter().map(move |s| [u.clone(), vec![*s]].concat())).collect();
    }
    out
}

/// `classify` lands on an enumerated region, and two valuations share a
/// region exactly when their signatures agree.
pub fn partition_soundness(p: &Partition, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_sig: HashMap<Vec<(i8, i64, bool)>, u32> = HashMap::new();
    let mut by_region: HashMap<u32, Vec<(i8, i64, bool)>> = HashMap::new();
    let mut bad = 0;
    let grid = if p.clocks().len() <= 3 { half_grid(p) } else { Vec::new() };
    let randoms = (0..samples).map(|_| random_valuation(&mut rng, p)).collect::<Vec<_>>();
    for u in grid.iter().chain(&randoms) {
        let region = p.classify(u);
        let Some(r) = p.lookup(&region) else {
            bad += 1;
            continue;
        };
        let sig = signature(p, u);
        bad += usize::from(*by_sig.entry(sig.clone()).or_insert(r) != r);
        bad += usize::from(*by_region.entry(r).or_insert(sig.clone()) != sig);
    }
    for r in 0..p.len() {
        let u = p.representative(r);
        bad += usize::from(p.classify_index(u) != r as u32);
    }
    bad
}

/// Constraints over the partition's clocks with constants inside the
/// ceiling, built from a seed.
pub fn constraint_corpus(p: &Partition, count: usize, seed: u64) -> Vec<ClockConstraint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.clocks().len();
    if n == 0 {
        return vec![ClockConstraint::True, ClockConstraint::False];
    }
    let rels = [Rel::Lt, Rel::Eq, Rel::Gt];
    let atom = |rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..n);
        let rel = rels[rng.gen_range(0..3)];
        let j = rng.gen_range(0..n);
        if n > 1 && j != i && rng.gen_bool(0.4) {
            let c = rng.gen_range(0..=p.k(i).min(p.k(j))) as u32;
            ClockConstraint::diff(&p.clocks()[i], &p.clocks()[j], rel, c)
        } else {
            ClockConstraint::atom(&p.clocks()[i], rel, rng.gen_range(0..=p.k(i)) as u32)
        }
    };
    (0..count)
        .map(|_| {
            let mut c = atom(&mut rng);
            for _ in 0..rng.gen_range(0..4) {
                let d = atom(&mut rng);
                c = if rng.gen_bool(0.5) { c.and(d) } else { c.or(d) };
            }
            c
        })
        .collect()
}

/// Every valuation of a region satisfies a constraint iff every other does,
/// and iff the region is in its Z set.
pub fn region_invariance(p: &Arc<Partition>, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = constraint_corpus(p, 60, seed);
    let zs: Vec<RegionSet> = corpus.iter().map(|c| zmap(p, c).unwrap()).collect();
    let mut bad = 0;
    for _ in 0..samples {
        let u = random_valuation(&mut rng, p);
        let r = p.classify_index(&u) as usize;
        let rep = p.representative(r);
        for (c, z) in corpus.iter().zip(&zs) {
            let value = |x: &str| u[p.clock_index(x).unwrap()];
            let at_rep = |x: &str| rep[p.clock_index(x).unwrap()];
            let holds = c.eval(&value);
            bad += usize::from(holds != c.eval(&at_rep));
            bad += usize::from(holds != z.contains(r));
            bad += usize::from(holds != region_satisfies(p, r, c).unwrap());
        }
    }
    bad
}

/// The region reached from `u` by the smallest delay that leaves its
/// region, and that delay.
pub fn leave(p: &Partition, u: &[Rational64]) -> Option<Vec<Rational64>> {
    let r = p.classify_index(u);
    let mut best: Option<Rational64> = None;
    let n = u.len();
    let mut candidates = Vec::new();
    for i in 0..n {
        if u[i] <= Rational64::from_integer(p.k(i) as i64) {
            candidates.push(u[i].floor() + 1 - u[i]);
        }
    }
    for d in candidates {
        best = Some(best.map_or(d, |b: Rational64| b.min(d)));
    }
    let d = best?;
    let mid: Vec<Rational64> = u.iter().map(|v| v + d / 2).collect();
    if p.classify_index(&mid) != r {
        return Some(mid);
    }
    Some(u.iter().map(|v| v + d).collect())
}

/// The structural successor agrees with the numeric one, and valuations
/// of one region pass through the same regions as time goes by.
pub fn successor_coherence(p: &Arc<Partition>, samples: usize, seed: u64) -> usize {
    let mut bad = 0;
    let trail = |u: &[Rational64]| {
        let mut out = vec![p.classify_index(u)];
        let mut cur = u.to_vec();
        while let Some(next) = leave(p, &cur) {
            let r = p.classify_index(&next);
            if r == *out.last().unwrap() {
                break;
            }
            out.push(r);
            cur = next;
        }
        out
    };
    for r in 0..p.len() {
        let t = trail(p.representative(r));
        let expected = t.get(1).copied().unwrap_or(r as u32);
        bad += usize::from(p.successor(r) != expected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first: HashMap<u32, Vec<u32>> = HashMap::new();
    for _ in 0..samples {
        let u = random_valuation(&mut rng, p);
        let t = trail(&u);
        bad += usize::from(*first.entry(t[0]).or_insert_with(|| t.clone()) != t);
    }
    bad
}

pub fn random_set(rng: &mut ChaCha8Rng, p: &Arc<Partition>, density: f64) -> RegionSet {
    RegionSet::from_indices(p, (0..p.len()).filter(|_| rng.gen_bool(density)))
}

/// Z is a homomorphism, complement is an involution, the boolean laws
/// hold, reset preimages are idempotent, and time closure is monotone
/// and idempotent.
pub fn set_laws(p: &Arc<Partition>, rounds: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = constraint_corpus(p, 40, seed ^ 0x5a);
    let mut bad = 0;
    for w in corpus.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (za, zb) = (zmap(p, a).unwrap(), zmap(p, b).unwrap());
        bad += usize::from(zmap(p, &a.clone().and(b.clone())).unwrap() != &za & &zb);
        bad += usize::from(zmap(p, &a.clone().or(b.clone())).unwrap() != &za | &zb);
    }
    let masks: Vec<u64> = (0..1u64 << p.clocks().len()).collect();
    for _ in 0..rounds {
        let d = rng.gen_range(0.05..0.95);
        let (a, b, c) = (random_set(&mut rng, p, d), random_set(&mut rng, p, d), random_set(&mut rng, p, d));
        bad += usize::from(a.neg().neg() != a);
        bad += usize::from(&a & &(&b | &c) != &(&a & &b) | &(&a & &c));
        bad += usize::from(&a | &(&b & &c) != &(&a | &b) & &(&a | &c));
        bad += usize::from((&a & &b).neg() != &a.neg() | &b.neg());
        bad += usize::from((&a | &b).neg() != &a.neg() & &b.neg());
        for &m in &masks {
            let once = a.reset_pred(m);
            bad += usize::from(once.reset_pred(m) != once);
        }
        let t = a.time_reach(&b);
        bad += usize::from(!(&a & &b).is_subset(&t) || !t.is_subset(&b));
        bad += usize::from(t != walk(p, &a, &b));
        bad += usize::from(t.time_reach(&b) != t);
        bad += usize::from(!t.is_subset(&(&a | &c).time_reach(&b)));
        bad += usize::from(!t.is_subset(&a.time_reach(&(&b | &c))));
    }
    bad
}

/// Time closure by walking each successor chain.
pub fn walk(p: &Arc<Partition>, target: &RegionSet, stay: &RegionSet) -> RegionSet {
    RegionSet::from_indices(
        p,
        (0..p.len()).filter(|&r| {
            let mut cur = r;
            loop {
                if !stay.contains(cur) {
                    return false;
                }
                if target.contains(cur) {
                    return true;
                }
                let next = p.successor(cur) as usize;
                if next == cur {
                    return false;
                }
                cur = next;
            }
        }),
    )
}

/// zmap(pretty(P)) = P on random sets.
pub fn pretty_roundtrip(p: &Arc<Partition>, count: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .filter(|_| {
            let d = rng.gen_range(0.0..1.0);
            let s = random_set(&mut rng, p, d);
            zmap(p, &pretty(&s)).unwrap() != s
        })
        .count()
}

/// Disagreements between predicate membership and the oracle's state
/// classification, over all admissible states: (nonblocking, bad).
pub fn agreement(g: &TimedAutomaton) -> (usize, usize) {
    let (n, _) = nbp(g).unwrap();
    let (b, _) = bsp(g, &n).unwrap();
    let ra = full_region_automaton(g, &g.clock_ceiling()).unwrap();
    let (ns, bs) = (nonblocking_states(&ra), bad_states(&ra));
    let mut wrong = (0, 0);
    for (s, st) in ra.states.iter().enumerate() {
        let r = st.region as usize;
        wrong.0 += usize::from(n.sets[st.location].contains(r) != ns[s]);
        wrong.1 += usize::from(b.sets[st.location].contains(r) != bs[s]);
    }
    wrong
}

/// A random deterministic plant over clocks `x` and `y` with one
/// uncontrollable, one controllable and one forcible event.
pub fn random_plant(seed: u64) -> TimedAutomaton {
    random_automaton(seed, "Random", &[("x", 2), ("y", 1)])
}

/// A random deterministic plant over the given clocks and ceilings.
pub fn random_automaton(seed: u64, name: &str, clocks: &[(&str, u32)]) -> TimedAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Partition::new(&ceiling(clocks));
    let guards = constraint_corpus(&p, 24, seed.wrapping_mul(7919));
    let mut invariants = vec!["true".to_string()];
    for (c, k) in clocks {
        for n in 1..=*k {
            invariants.push(format!("{c} <= {n}"));
            invariants.push(format!("{c} < {n}"));
        }
    }
    if let [(x, kx), (y, ky), ..] = clocks {
        invariants.push(format!("{x} <= {kx} and {y} <= {ky}"));
        invariants.push(format!("{x} - {y} <= {}", kx.min(ky)));
    }
    let names: Vec<&str> = clocks.iter().map(|c| c.0).collect();
    let n = rng.gen_range(2..=4);
    let mut text = String::from("event uncontrollable u; event controllable c; event controllable forcible f;\n");
    text.push_str(&format!("plant {name} {{\n clock {};\n alphabet u, c, f;\n", names.join(", ")));
    let marked = rng.gen_range(0..n);
    for l in 0..n {
        let mut attrs = Vec::new();
        if l == 0 {
            attrs.push("initial");
        }
        if l == marked || rng.gen_bool(0.2) {
            attrs.push("marked");
        }
        let inv = if l == 0 && rng.gen_bool(0.5) { "true" } else { &invariants[rng.gen_range(0..invariants.len())] };
        let colon = if attrs.is_empty() { String::new() } else { format!(": {}", attrs.join(", ")) };
        text.push_str(&format!(" location l{l}{colon} invariant {inv};\n"));
    }
    for l in 0..n {
        for ev in ["u", "c", "f"] {
            if rng.gen_bool(0.55) {
                let t = rng.gen_range(0..n);
                let g = &guards[rng.gen_range(0..guards.len())];
                let mut resets: Vec<&str> = names.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
                resets.sort();
                let resets = if resets.is_empty() { String::new() } else { format!(" reset {}", resets.join(", ")) };
                text.push_str(&format!(" edge l{l} -> l{t} on {ev} when {g}{resets};\n"));
            }
        }
    }
    text.push('}');
    parse_model(&text).unwrap_or_else(|e| panic!("{e}\n{text}")).remove(0)
}

fn growing(iterates: &[tasc::synthesis::PredicateMap]) -> bool {
    iterates.windows(2).all(|w| w[0].sets.iter().zip(&w[1].sets).all(|(a, b)| a.is_subset(b)))
}

/// Every law the synthesis result of `g` should obey, checked against the
/// region automaton. Returns a description of each violation.
pub fn synthesis_laws(g: &TimedAutomaton) -> Vec<String> {
    let mut out = Vec::new();
    let mut fail = |ok: bool, what: &str| {
        if !ok {
            out.push(what.to_string());
        }
    };
    let (n, ns) = nbp(g).unwrap();
    let (_, bs) = bsp(g, &n).unwrap();
    let s = tscs(g, Options::default()).unwrap();
    let p = s.partition.clone();
    let states = g.locations.len() * p.len();
    fail(ns.len() <= states + 2 && bs.len() <= states + 2, "fixpoint iteration bound");
    fail(growing(&ns) && growing(&bs), "iterates grow");
    let rounds = s.trace.iter().map(|t| t.outer).max().unwrap_or(0) + 1;
    let inner = s.trace.iter().map(|t| t.inner).max().unwrap_or(0) + 1;
    fail(rounds <= states + 1 && inner <= g.edges.len() * p.len() + 1, "loop bounds");
    let shrinking = s.trace.windows(2).all(|w| {
        w[1].guards.iter().zip(&w[0].guards).all(|(a, b)| a.is_subset(b))
            && w[1].invariants.iter().zip(&w[0].invariants).all(|(a, b)| a.is_subset(b))
    });
    fail(shrinking, "guards and invariants only shrink");
    fail(agreement(g) == (0, 0), "predicates agree with the oracle");
    let Some(sup) = &s.supervisor else {
        fail(indirect_synthesize(g).unwrap().is_empty(), "undefined synthesis matches an empty indirect result");
        return out;
    };
    fail(sup.validate().is_ok(), "supervisor is well formed");
    fail(is_subautomaton(sup, g).unwrap(), "supervisor is a sub-automaton");
    fail(check_nonblocking(sup).unwrap().passed, "supervisor is nonblocking");
    fail(check_controllability(sup, g).unwrap().passed, "supervisor is controllable");
    let fed = tscs(g, Options { invariant_feedback: true, ..Options::default() }).unwrap();
    let mut k = merge_ceilings(&g.clock_ceiling(), &sup.clock_ceiling());
    if let Some(f) = &fed.supervisor {
        k = merge_ceilings(&k, &f.clock_ceiling());
    }
    let shared = Partition::new(&k);
    let ra = region_automaton_over(sup, shared.clone()).unwrap();
    let reach_bad = ra.states.iter().any(|st| {
        let name = &sup.locations[st.location].name;
        let r = p.classify_index(shared.representative(st.region as usize));
        s.bad.get(name).unwrap().contains(r as usize)
    });
    fail(!reach_bad, "no reachable state is bad");
    let both = sync_product(sup, g).unwrap();
    let ra_both = region_automaton_over(&both, shared.clone()).unwrap();
    fail(ra_language_equal(&ra, &ra_both).unwrap(), "S || G = S");
    let indirect = indirect_on(&region_automaton_over(g, shared.clone()).unwrap());
    fail(!indirect.is_empty(), "indirect synthesis is non-empty");
    fail(ra_language_equal(&ra, &indirect.supervisor).unwrap(), "equal to indirect synthesis");
    match fed.supervisor {
        Some(f) => {
            let fed_ra = region_automaton_over(&f, shared.clone()).unwrap();
            fail(ra_language_equal(&ra, &fed_ra).unwrap(), "invariant feedback keeps the behaviour");
        }
        None => fail(false, "invariant feedback keeps the initial state"),
    }
    out
}

/// Random strengthenings of the controllable guards and the invariants of
/// `source` that the oracle accepts as proper supervisors of `g` and that
/// differ from `sup`. Returns how many were found and how many of those
/// escape `sup`.
pub fn sub_supervisors(
    g: &TimedAutomaton,
    sup: &TimedAutomaton,
    source: &TimedAutomaton,
    wanted: usize,
    seed: u64,
) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Partition::new(&merge_ceilings(&g.clock_ceiling(), &sup.clock_ceiling()));
    let corpus = constraint_corpus(&Partition::new(&g.clock_ceiling()), 200, seed);
    let base = region_automaton_over(sup, p.clone()).unwrap();
    let (mut found, mut escaping) = (0, 0);
    for _ in 0..200 * wanted {
        if found == wanted {
            break;
        }
        let mut cand = source.clone();
        for e in &mut cand.edges {
            if g.event(&e.event).unwrap().controllable && rng.gen_bool(0.7) {
                e.guard = e.guard.clone().and(corpus[rng.gen_range(0..corpus.len())].clone());
            }
        }
        for l in &mut cand.locations {
            if rng.gen_bool(0.5) {
                l.invariant = l.invariant.clone().and(corpus[rng.gen_range(0..corpus.len())].clone());
            }
        }
        let ra = region_automaton_over(&cand, p.clone()).unwrap();
        if ra.initial.is_none()
            || ra_language_equal(&ra, &base).unwrap()
            || !check_nonblocking(&cand).unwrap().passed
            || !check_controllability(&cand, g).unwrap().passed
        {
            continue;
        }
        found += 1;
        escaping += usize::from(!ra_language_included(&ra, &base).unwrap());
    }
    (found, escaping)
}
