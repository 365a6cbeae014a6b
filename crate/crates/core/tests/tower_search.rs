use bogocert_core::construct::{trinomial_step, SPLIT_SEARCH_BOUND};
use bogocert_core::Error;

#[test]
fn second_trinomial_step_exhausts_split_search() {
    let first = trinomial_step(&[], 12).unwrap();
    let t = std::time::Instant::now();
    match trinomial_step(&[first], 24) {
        Err(Error::SearchExhausted { message, .. }) => assert!(message.contains(&SPLIT_SEARCH_BOUND.to_string())),
        other => panic!("expected exhausted search, got {other:?}"),
    }
    eprintln!("split search took {:?}", t.elapsed());
}
