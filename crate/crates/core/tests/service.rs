use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use brokenline::fixtures;
use brokenline::matroid::Matroid;
use brokenline::service::{router, AppState};
use brokenline::session::Session;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(state: &Arc<AppState>, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let response = router(state.clone()).oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn line_request() -> Value {
    json!({ "vfav": [0, 1, 2], "pivots": [], "initial": [1, 2, 3, 4, 5, 6], "perturb_ties": true })
}

fn graphic_state() -> Arc<AppState> {
    AppState::new(Session::new(fixtures::graphic_matroid()), None)
}

#[tokio::test]
async fn matroid_summary() {
    let state = graphic_state();
    let (status, body) = call(&state, "GET", "/matroid", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["basis_count"], 13);
    assert_eq!(body["rank"], 3);
    assert_eq!(body["h_vector"], json!([1, 3, 5, 4]));
}

#[tokio::test]
async fn search_without_pivots_stores_the_line_shelling() {
    let state = graphic_state();
    let (status, body) = call(&state, "POST", "/search", Some(line_request())).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["added"], 1);
    assert_eq!(body["store"]["revision"], 1);
    let sweep = &body["store"]["sweeps"][0];
    let table = fixtures::graphic_line_table();
    let order: Vec<Value> = table.iter().map(|(b, _)| json!(b)).collect();
    let ip: Vec<Value> = table.iter().map(|(_, r)| json!(r)).collect();
    assert_eq!(sweep["order"], Value::Array(order));
    assert_eq!(sweep["ip_sets"], Value::Array(ip));

    let (status, view) = call(&state, "GET", "/sweep/0", None).await;
    assert_eq!(status, StatusCode::OK);
    let rows = view["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0]["vertex"], "(1, 1, 1, 0, 0, 0)");
    assert_eq!(rows[0]["functional"], "(1.00, 2.00, 3.00, 4.00, 5.00, 6.00)");
    assert_eq!(rows[12]["ip_set"], "[2, 4, 5]");
}

#[tokio::test]
async fn vfav_outside_the_bases_is_rejected() {
    let state = graphic_state();
    let (status, body) = call(&state, "POST", "/search", Some(json!({ "vfav": [3, 4, 5] }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("basis"), "{body}");
    let (status, _) = call(&state, "POST", "/search", Some(json!({ "vfav": [0, 1, 2], "w": "-1" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&state, "POST", "/search", Some(json!({ "vfav": [0, 1, 2], "pivots": [13] }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn stale_revision_is_a_conflict() {
    let state = graphic_state();
    let (status, _) = call(&state, "POST", "/search", Some(line_request())).await;
    assert_eq!(status, StatusCode::OK);
    let mut stale = json!({ "vfav": [0, 1, 2], "pivots": [1], "seed": 3, "revision": 0 });
    let (status, _) = call(&state, "POST", "/update", Some(stale.clone())).await;
    assert_eq!(status, StatusCode::CONFLICT);
    stale["revision"] = json!(1);
    let (status, body) = call(&state, "POST", "/update", Some(stale)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["store"]["revision"], 2);
}

#[tokio::test]
async fn update_keeps_earlier_sweeps() {
    let state = graphic_state();
    let (_, first) = call(&state, "POST", "/search", Some(line_request())).await;
    let hash = first["store"]["sweeps"][0]["region_hash"].clone();
    for seed in 0..3 {
        let req = json!({ "vfav": [0, 1, 2], "pivots": [1, 2], "limit": 2, "misses": 20, "w": 5, "seed": seed });
        let (status, body) = call(&state, "POST", "/update", Some(req)).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        assert_eq!(body["store"]["sweeps"][0]["region_hash"], hash);
    }
    let (_, store) = call(&state, "GET", "/store", None).await;
    assert!(store["sweeps"].as_array().unwrap().len() > 1);
}

#[tokio::test]
async fn catalan_sweep_poset_has_a_labeling() {
    let m = Matroid::catalan(3).unwrap();
    let mut session = Session::new(m.clone());
    let sweep = fixtures::catalan_pivot_sweep().sweep(&m).unwrap();
    assert!(session.store.insert(&m, sweep).unwrap());
    let state = AppState::new(session, None);
    let (status, body) = call(&state, "GET", "/poset/0", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["labeling"]["result"], "labeling");
    let labels = body["labeling"]["labeling"]["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 14);
    assert_eq!(body["structure"]["greedoid"], true);
    assert_eq!(body["poset"]["nodes"].as_array().unwrap().len(), 14);
    let (status, _) = call(&state, "GET", "/poset/1", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn graphic_line_poset_reports_the_certificate() {
    let state = graphic_state();
    call(&state, "POST", "/search", Some(line_request())).await;
    let (status, body) = call(&state, "GET", "/poset/0", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["labeling"]["result"], "no_labeling");
    assert_eq!(body["labeling"]["certificate"]["kind"], "blocked");
    assert_eq!(body["labeling"]["certificate"]["blocked"], json!([9, 10, 11, 12]));
}

#[tokio::test]
async fn missing_sweep_is_not_found() {
    let (status, body) = call(&graphic_state(), "GET", "/sweep/0", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].is_string());
}

#[tokio::test]
async fn changes_are_saved_to_the_session_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("session.json");
    let state = AppState::new(Session::new(fixtures::graphic_matroid()), Some(path.clone()));
    call(&state, "POST", "/search", Some(line_request())).await;
    let saved = Session::load(&path).unwrap();
    assert_eq!(saved, state.snapshot().0);
}
