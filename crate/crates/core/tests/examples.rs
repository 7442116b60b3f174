//! Every example must run to completion.

#[path = "../examples/preimages.rs"]
mod preimages_example;

#[test]
fn preimages_example_runs() {
    preimages_example::run_example().expect("example should run");
}

#[path = "../examples/digit_dynamics.rs"]
mod digit_dynamics_example;

#[test]
fn digit_dynamics_example_runs() {
    digit_dynamics_example::run_example().expect("example should run");
}

#[path = "../examples/sawtooth.rs"]
mod sawtooth_example;

#[test]
fn sawtooth_example_runs() {
    sawtooth_example::run_example().expect("example should run");
}

#[path = "../examples/probe.rs"]
mod probe_example;

#[test]
fn probe_example_runs() {
    probe_example::run_example().expect("example should run");
}

#[path = "../examples/commutants.rs"]
mod commutants_example;

#[test]
fn commutants_example_runs() {
    commutants_example::run_example().expect("example should run");
}

#[path = "../examples/continuation.rs"]
mod continuation_example;

#[test]
fn continuation_example_runs() {
    continuation_example::run_example().expect("example should run");
}

#[path = "../examples/conjugacy.rs"]
mod conjugacy_example;

#[test]
fn conjugacy_example_runs() {
    conjugacy_example::run_example().expect("example should run");
}

#[path = "../examples/audit.rs"]
mod audit_example;

#[test]
fn audit_example_runs() {
    audit_example::run_example().expect("example should run");
}
