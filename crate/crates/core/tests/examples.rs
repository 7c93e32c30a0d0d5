macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(worked_example, "worked_example.rs");
example!(translate_defaults, "translate_defaults.rs");
example!(ground_and_dump, "ground_and_dump.rs");
example!(stable_models, "stable_models.rs");
example!(nonmonotonic, "nonmonotonic.rs");
example!(derived_anomaly, "derived_anomaly.rs");
example!(disruptive_factor, "disruptive_factor.rs");
example!(linguistic, "linguistic.rs");
example!(corpus, "corpus.rs");

#[test]
fn examples_run() {
    worked_example::run_example().expect("worked_example");
    translate_defaults::run_example().expect("translate_defaults");
    ground_and_dump::run_example().expect("ground_and_dump");
    stable_models::run_example().expect("stable_models");
    nonmonotonic::run_example().expect("nonmonotonic");
    derived_anomaly::run_example().expect("derived_anomaly");
    disruptive_factor::run_example().expect("disruptive_factor");
    linguistic::run_example().expect("linguistic");
    corpus::run_example().expect("corpus");
}
