use qrucible::{default_suite_dir, detects_perturbation, load_dir};
use rayon::prelude::*;

#[test]
fn every_registry_case_detects_a_perturbed_exponent() {
    let cases = load_dir(&default_suite_dir()).unwrap();
    let failures: Vec<String> =
        cases.par_iter().filter_map(|c| detects_perturbation(c).err().map(|e| format!("{}: {e}", c.name()))).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}
