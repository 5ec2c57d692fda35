use finitist::checks::{self, Outcome};

fn assert_clean(name: &str, o: Outcome) {
    assert!(o.checked > 0, "{name}: nothing checked");
    assert!(
        o.ok(),
        "{name}: {} violations, first: {:#?}",
        o.violations.len(),
        o.violations
    );
}

#[test]
fn assertibility_is_classical() {
    let o = checks::assertibility_is_cpc(4, 1000, 21);
    assert_eq!(o.checked, 2 + 14 + 182 + 2954 + 53690 + 1000);
    assert_clean("assertibility", o);
}

#[test]
fn logic_chain() {
    assert_clean("chain", checks::logic_chain(4));
}

#[test]
fn model_semantics() {
    assert_clean("semantics", checks::semantics(100, 30, 50, 22));
}

#[test]
fn search_is_sound_and_complete_on_samples() {
    let o = checks::search_soundness(300, 30, 23);
    assert_clean("search", o);
}

#[test]
fn copy_models() {
    let o = checks::copy_model_correspondence(30, 20, 24);
    assert_eq!(o.checked, 600);
    assert_clean("copy model", o);
}

#[test]
fn generation_structures() {
    assert_clean("generations", checks::generations(30, 3, 25));
}

#[test]
fn ipc_countermodels_transfer() {
    let o = checks::ipc_countermodels(10, 26);
    assert_eq!(o.checked, 10);
    assert_clean("ipc", o);
}
