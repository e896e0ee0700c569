//! Browser bindings: synthesize a supervisor from model text, map the
//! state predicates of a location over the plane of two clocks, and
//! classify a single valuation.

use num_rational::Rational64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use tasc::cli::{parse_model, ModelFile};
use tasc::model::{product_all, Kind, TimedAutomaton};
use tasc::regions::{zmap, RegionSet};
use tasc::synthesis::{synthesize_with_requirements, Completion, Options, Synthesis};

/// The bundled example models, keyed by name.
#[wasm_bindgen]
pub fn presets() -> String {
    let requirements: String = include_str!("../../core/models/train_gate_requirements.ta")
        .lines()
        .filter(|l| !l.starts_with("event "))
        .map(|l| format!("{l}\n"))
        .collect();
    json!({
        "bus-pedestrian": include_str!("../../core/models/bus_pedestrian.ta"),
        "train-gate": format!("{}\n{requirements}", include_str!("../../core/models/train_gate.ta")),
        "premature-tau": include_str!("../../core/models/premature_tau.ta"),
    })
    .to_string()
}

fn plant_and_requirements(src: &str) -> Result<(TimedAutomaton, Vec<TimedAutomaton>), String> {
    let (rs, plants): (Vec<_>, Vec<_>) =
        parse_model(src).map_err(|e| e.to_string())?.into_iter().partition(|a| a.kind == Kind::Requirement);
    if plants.is_empty() {
        return Err("no plant in the model".into());
    }
    Ok((product_all(&plants).map_err(|e| e.to_string())?, rs))
}

fn run(src: &str, forcing: bool, invariant_feedback: bool) -> Result<Synthesis, String> {
    let (g, rs) = plant_and_requirements(src)?;
    let options = Options { forcing, invariant_feedback };
    synthesize_with_requirements(&g, &rs, Completion::AfterProduct, options)
        .map(|r| r.result)
        .map_err(|e| e.to_string())
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Supervisor text and final predicates as JSON.
#[wasm_bindgen]
pub fn synthesize(src: &str, forcing: bool, invariant_feedback: bool) -> String {
    respond(run(src, forcing, invariant_feedback).map(|s| {
        let preds: Vec<Value> = s
            .nonblocking
            .locations
            .iter()
            .enumerate()
            .map(|(l, name)| {
                json!({
                    "location": name,
                    "nonblocking": s.nonblocking.sets[l].pretty().to_string(),
                    "bad": s.bad.sets[l].pretty().to_string(),
                })
            })
            .collect();
        json!({
            "defined": !s.is_undefined(),
            "supervisor": s.supervisor.as_ref().map(|t| ModelFile::from_automata(vec![t.clone()]).serialize()),
            "regions": s.partition.len(),
            "rounds": s.trace.len(),
            "predicates": preds,
        })
    }))
}

/// Location state on a grid: 0 outside the supervisor's invariant (or the
/// location is gone), 1 allowed and not bad, 2 allowed but bad, 3 bad and
/// cut off by the invariant.
fn state_code(s: &Synthesis, l: usize, inv: &RegionSet, r: usize) -> u8 {
    let bad = s.bad.sets[l].contains(r);
    match (inv.contains(r), bad) {
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
        (false, false) => 0,
    }
}

fn supervisor_invariant(s: &Synthesis, l: usize) -> RegionSet {
    let name = &s.nonblocking.locations[l];
    match s.supervisor.as_ref().and_then(|t| t.location(name)) {
        Some(loc) => zmap(&s.partition, &loc.invariant).unwrap_or_else(|_| RegionSet::empty(&s.partition)),
        None => RegionSet::empty(&s.partition),
    }
}

/// Samples the plane of the first two clocks (others held at zero) with
/// `steps` points per time unit, for one location. Returns the codes row
/// by row, y growing.
#[wasm_bindgen]
pub fn region_map(src: &str, location: &str, steps: u32, forcing: bool) -> String {
    respond(run(src, forcing, false).and_then(|s| {
        let p = s.partition.clone();
        let n = p.clocks().len();
        if n == 0 || n > 3 {
            return Err("the map needs one to three clocks".into());
        }
        let l = s.nonblocking.locations.iter().position(|x| x == location).ok_or("unknown location")?;
        let inv = supervisor_invariant(&s, l);
        let k = |i: usize| if i < n { p.k(i) as i64 + 1 } else { 1 };
        let (w, h) = (k(0) * steps as i64, k(1) * steps as i64);
        let mut codes = Vec::with_capacity(((w + 1) * (h + 1)) as usize);
        for j in 0..=h {
            for i in 0..=w {
                let mut u = vec![Rational64::from_integer(0); n];
                u[0] = Rational64::new(2 * i + 1, 2 * steps as i64);
                if n > 1 {
                    u[1] = Rational64::new(2 * j + 1, 2 * steps as i64);
                }
                codes.push(state_code(&s, l, &inv, p.classify_index(&u) as usize));
            }
        }
        Ok(json!({
            "clocks": p.clocks(),
            "ceiling": p.ceiling(),
            "width": w + 1,
            "height": h + 1,
            "steps": steps,
            "codes": codes,
        }))
    }))
}

fn rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a non-negative rational");
    let r = if let Some((a, b)) = s.split_once('/') {
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if b == 0 {
            return Err(bad());
        }
        Rational64::new(a, b)
    } else if let Some((a, b)) = s.split_once('.') {
        let den = 10i64.checked_pow(b.len() as u32).ok_or_else(bad)?;
        let whole: i64 = if a.is_empty() { 0 } else { a.parse().map_err(|_| bad())? };
        let frac: i64 = if b.is_empty() { 0 } else { b.parse().map_err(|_| bad())? };
        Rational64::new(whole * den + frac, den)
    } else {
        Rational64::from_integer(s.parse().map_err(|_| bad())?)
    };
    if r < Rational64::from_integer(0) {
        return Err(bad());
    }
    Ok(r)
}

/// Region of a valuation, given as comma-separated rationals in clock
/// order, and its status in every location.
#[wasm_bindgen]
pub fn classify(src: &str, valuation: &str, forcing: bool) -> String {
    respond(run(src, forcing, false).and_then(|s| {
        let p = s.partition.clone();
        let u: Vec<Rational64> = valuation.split(',').map(rational).collect::<Result<_, _>>()?;
        if u.len() != p.clocks().len() {
            return Err(format!("expected {} values for {}", p.clocks().len(), p.clocks().join(", ")));
        }
        let r = p.classify_index(&u) as usize;
        let locations: Vec<Value> = (0..s.nonblocking.locations.len())
            .map(|l| {
                let inv = supervisor_invariant(&s, l);
                json!({
                    "location": s.nonblocking.locations[l],
                    "nonblocking": s.nonblocking.sets[l].contains(r),
                    "bad": s.bad.sets[l].contains(r),
                    "allowed": inv.contains(r),
                })
            })
            .collect();
        Ok(json!({ "region": r, "description": p.region(r).describe(&p), "locations": locations }))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUS: &str = include_str!("../../core/models/bus_pedestrian.ta");

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn presets_parse() {
        let v = parse(presets());
        for (name, text) in v.as_object().unwrap() {
            let r = parse(synthesize(text.as_str().unwrap(), true, false));
            assert!(r["error"].is_null(), "{name}: {r}");
        }
        let tg = v["train-gate"].as_str().unwrap();
        assert_eq!(parse(synthesize(tg, true, false))["regions"], 21204);
    }

    #[test]
    fn synthesize_bus_pedestrian() {
        let v = parse(synthesize(BUS, true, false));
        assert_eq!(v["defined"], true);
        assert!(v["supervisor"].as_str().unwrap().contains("x < 2 and x - y <= 1"));
        assert_eq!(parse(synthesize(BUS, false, false))["defined"], false);
        assert!(parse(synthesize("plant", true, false))["error"].is_string());
    }

    #[test]
    fn map_marks_the_cut_corner() {
        let v = parse(region_map(BUS, "a.r.s0", 4, true));
        let (w, steps) = (v["width"].as_u64().unwrap() as usize, 4.0);
        let codes: Vec<u64> = v["codes"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
        let at = |x: f64, y: f64| codes[((y * steps) as usize) * w + (x * steps) as usize];
        assert_eq!(at(0.5, 0.5), 1);
        assert_eq!(at(1.9, 0.2), 3);
        assert_eq!(at(2.5, 1.5), 3);
        assert_eq!(at(1.2, 1.5), 1);
    }

    #[test]
    fn classify_points() {
        let v = parse(classify(BUS, "1, 1", true));
        assert_eq!(v["description"], "[x=1, y=1, y-x=0]");
        let a = &v["locations"][0];
        assert_eq!((a["location"].as_str(), a["bad"].as_bool()), (Some("a.r.s0"), Some(false)));
        let v = parse(classify(BUS, "1.5, 1/4", true));
        assert_eq!(v["locations"][0]["bad"], true);
        assert!(parse(classify(BUS, "1", true))["error"].is_string());
        assert!(parse(classify(BUS, "-1, 0", true))["error"].is_string());
    }
}
