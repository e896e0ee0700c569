mod support;

use tasc::model::is_subautomaton;
use tasc::synthesis::{tscs, Options};

use support::*;

#[test]
fn case_studies_obey_the_synthesis_laws() {
    assert_eq!(synthesis_laws(&bus_pedestrian()), Vec::<String>::new());
    assert_eq!(synthesis_laws(&premature_tau()), Vec::<String>::new());
}

#[test]
fn random_plants_obey_the_synthesis_laws() {
    let mut defined = 0;
    for seed in 0..150 {
        let g = random_plant(seed);
        let broken = synthesis_laws(&g);
        assert!(broken.is_empty(), "seed {seed}: {broken:?}");
        defined += usize::from(tscs(&g, Options::default()).unwrap().supervisor.is_some());
    }
    assert!(defined > 20, "only {defined} defined supervisors");
}

#[test]
fn supervisor_is_a_sub_automaton_of_the_plant() {
    let g = bus_pedestrian();
    let s = tscs(&g, Options::default()).unwrap().supervisor.unwrap();
    assert!(is_subautomaton(&s, &g).unwrap());
    assert!(is_subautomaton(&g, &g).unwrap());
    assert!(!is_subautomaton(&g, &s).unwrap());
}

#[test]
fn strengthened_supervisors_stay_inside() {
    let g = bus_pedestrian();
    let s = tscs(&g, Options::default()).unwrap().supervisor.unwrap();
    assert_eq!(sub_supervisors(&g, &s, &s, 50, 7), (50, 0));
}

#[test]
fn proper_supervisors_carved_from_the_plant_stay_inside() {
    let g = bus_pedestrian();
    let s = tscs(&g, Options::default()).unwrap().supervisor.unwrap();
    let (found, escaping) = sub_supervisors(&g, &s, &g, 20, 13);
    assert!(found >= 5, "{found}");
    assert_eq!(escaping, 0);
}
