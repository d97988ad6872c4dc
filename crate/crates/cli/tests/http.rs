//! The `/v1` service, driven through the router without a socket.

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use tropical_ahp_cli::server::{router, ServerConfig};

const VACATION: &str = include_str!("../../../docs/examples/vacation.json");

async fn call(app: &Router, method: Method, uri: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn app() -> Router {
    router(&ServerConfig::default())
}

#[tokio::test]
async fn health() {
    let (status, body) = call(&app(), Method::GET, "/v1/health", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
    assert_eq!(body["version"], env!("CARGO_PKG_VERSION"));
}

#[tokio::test]
async fn rate_vacation() {
    let (status, body) = call(&app(), Method::POST, "/v1/rate", VACATION).await;
    assert_eq!(status, StatusCode::OK);
    let mu = body["optimum"].as_f64().unwrap();
    assert!((mu - 2.0 * 5f64.powf(0.625) * 7f64.sqrt()).abs() < 1e-9 * mu);
    assert_eq!(body["combined_order"], "(4) >= (1) > (3) >= (2)");
}

#[tokio::test]
async fn validation_errors_are_400() {
    let mut doc: Value = serde_json::from_str(VACATION).unwrap();
    doc["criteria_matrix"] = json!([
        [1, "1/5", "1/5", 1, "1/3"],
        [4, 1, "1/5", "1/5", 1],
        [null, null, 1, "1/5", 1],
        [null, null, null, 1, 5],
        [null, null, null, null, 1]
    ]);
    let (status, body) = call(&app(), Method::POST, "/v1/rate", &doc.to_string()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "reciprocity_violation");
    assert_eq!(body["location"], json!({"matrix": "criteria_matrix", "row": 1, "col": 2}));

    let (status, body) = call(&app(), Method::POST, "/v1/rate", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "malformed_document");
}

#[tokio::test]
async fn solver_errors_are_422() {
    let mut doc: Value = serde_json::from_str(VACATION).unwrap();
    doc["options"]["enum_cap"] = json!(5);
    let (status, body) = call(&app(), Method::POST, "/v1/rate", &doc.to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "enumeration_cap");

    let (status, body) = call(&app(), Method::POST, "/v1/seminorm", r#"{"generators": [[1, 0], [0, 1]]}"#).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "nonpositive_generators");
}

#[tokio::test]
async fn solve_and_seminorm() {
    let (status, body) = call(&app(), Method::POST, "/v1/solve", r#"[[1, 3], ["1/3", 1]]"#).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["optimum"], 1.0);
    assert_eq!(body["generators"], json!([[1.0], [1.0 / 3.0]]));

    let r = 2.0 * 7f64.sqrt() * 5f64.powf(-0.125);
    let b = json!({"generators": [
        [1.0, r / 4.0, 0.75],
        [3.0 / r, 1.0, 3.0 / r],
        [4.0 / r, 1.0, 3.0 / r],
        [1.0, r / 4.0, 1.0]
    ]});
    let (status, body) = call(&app(), Method::POST, "/v1/seminorm", &b.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let best = body["most_differentiating"]["value"].as_f64().unwrap();
    let least = body["least_differentiating"]["value"].as_f64().unwrap();
    assert!((best - r / 3.0).abs() < 1e-9 * best);
    assert!((least - r / 4.0).abs() < 1e-9 * least);
    assert_eq!(body["most_differentiating"]["representatives"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn unknown_route_is_404() {
    let (status, _) = call(&app(), Method::GET, "/v2/rate", "").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app(), Method::GET, "/v1/rate", "").await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
}

async fn preflight(app: &Router, origin: &str) -> Option<String> {
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/v1/rate")
        .header(header::ORIGIN, origin)
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .header(header::ACCESS_CONTROL_REQUEST_HEADERS, "content-type")
        .body(Body::empty())
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    resp.headers()
        .get(header::ACCESS_CONTROL_ALLOW_ORIGIN)
        .map(|v| v.to_str().unwrap().to_string())
}

#[tokio::test]
async fn cross_origin_requests() {
    assert_eq!(preflight(&app(), "http://ui.example").await.as_deref(), Some("*"));

    let restricted = router(&ServerConfig {
        allow_origins: vec!["http://ui.example".into()],
    });
    assert_eq!(
        preflight(&restricted, "http://ui.example").await.as_deref(),
        Some("http://ui.example")
    );
    assert_eq!(preflight(&restricted, "http://elsewhere.example").await, None);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_requests_agree() {
    let app = app();
    let tasks: Vec<_> = (0..16)
        .map(|_| {
            let app = app.clone();
            tokio::spawn(async move { call(&app, Method::POST, "/v1/rate", VACATION).await })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        let (status, body) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        bodies.push(body);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}
