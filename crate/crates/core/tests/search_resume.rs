use selfdual::search::{run_search, ResultStore, SearchPlan};

fn plan() -> SearchPlan {
    SearchPlan::from_text("p = 19\nf = 2\ntarget_d = 14\nv_pairs = 1:93\nu1 = 5..6\nshadow_w_max = 11\n").unwrap()
}

#[test]
fn resumed_run_matches_single_run() {
    let whole = run_search(&plan(), None).unwrap();
    assert!(whole.complete);
    assert_eq!(whole.stats.processed, whole.stats.grid_size);

    let dir = std::env::temp_dir().join(format!("selfdual-resume-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut p = plan();
    p.checkpoint = Some(dir.join("store.json"));
    p.checkpoint_every = 50;
    p.budget = Some(120);
    let mut runs = 0;
    let resumed = loop {
        let store = run_search(&p, None).unwrap();
        runs += 1;
        if store.complete {
            break store;
        }
        assert_eq!(ResultStore::load(p.checkpoint.as_ref().unwrap()).unwrap(), store);
    };
    assert!(runs > 1);
    assert_eq!(resumed.codes, whole.codes);
    assert_eq!(resumed.stats, whole.stats);

    let mut other = plan();
    other.checkpoint = p.checkpoint.clone();
    other.target_d = 12;
    assert!(run_search(&other, None).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_results() {
    let mut one = plan();
    one.threads = Some(1);
    let mut three = plan();
    three.threads = Some(3);
    assert_eq!(run_search(&one, None).unwrap().codes, run_search(&three, None).unwrap().codes);
}
