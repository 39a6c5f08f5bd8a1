//! Run a search through the JSON API in process, then optionally serve it.
//!
//! cargo run --example service            # one request, printed
//! cargo run --example service -- 8080    # keep serving on 127.0.0.1:8080

use axum::body::Body;
use axum::http::Request;
use brokenline::fixtures;
use brokenline::service::{router, serve, AppState};
use brokenline::session::Session;
use http_body_util::BodyExt;
use tower::ServiceExt;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = AppState::new(Session::new(fixtures::graphic_matroid()), None);
    let body = r#"{"vfav": [0, 1, 2], "pivots": [1, 2], "w": 5, "seed": 7}"#;
    let request = Request::post("/search")
        .header("content-type", "application/json")
        .body(Body::from(body))?;
    let response = router(state.clone()).oneshot(request).await?;
    let bytes = response.into_body().collect().await?.to_bytes();
    let reply: serde_json::Value = serde_json::from_slice(&bytes)?;
    println!("added {} sweeps, posets {}", reply["added"], reply["store"]["posets"]);

    if let Some(port) = std::env::args().nth(1) {
        let addr = format!("127.0.0.1:{port}").parse()?;
        println!("serving on http://{addr}");
        serve(state, addr).await?;
    }
    Ok(())
}
