//! Stateless JSON service under `/v1`.
//!
//! | method | path           | body in                     | body out            |
//! |--------|----------------|-----------------------------|---------------------|
//! | POST   | `/v1/rate`     | problem document            | result document     |
//! | POST   | `/v1/solve`    | `{"matrix": ...}`           | solution set        |
//! | POST   | `/v1/seminorm` | `{"generators": ...}`       | best/least vectors  |
//! | GET    | `/v1/health`   |                             | status and version  |
//!
//! Input errors answer 400 and solver failures 422, both with an
//! `{code, message, location}` body.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::json;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tropical_ahp::document::{
    rate_document, seminorm_document, solve_document, DocOptions, ErrorBody, ErrorKind,
};

#[derive(Debug, Clone, Default)]
pub struct ServerConfig {
    /// Origins allowed to make cross-origin requests; empty allows any.
    pub allow_origins: Vec<String>,
}

fn cors(config: &ServerConfig) -> CorsLayer {
    let origins = if config.allow_origins.is_empty() {
        AllowOrigin::from(Any)
    } else {
        AllowOrigin::list(
            config
                .allow_origins
                .iter()
                .filter_map(|o| HeaderValue::from_str(o).ok()),
        )
    };
    CorsLayer::new()
        .allow_origin(origins)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
}

pub fn router(config: &ServerConfig) -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/rate", post(rate))
        .route("/v1/solve", post(solve))
        .route("/v1/seminorm", post(seminorm))
        .layer(cors(config))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

fn respond<T: Serialize>(result: Result<T, ErrorBody>) -> Response {
    match result {
        Ok(doc) => (StatusCode::OK, Json(doc)).into_response(),
        Err(e) => {
            let status = match e.kind {
                ErrorKind::Validation => StatusCode::BAD_REQUEST,
                ErrorKind::Solver => StatusCode::UNPROCESSABLE_ENTITY,
            };
            (status, Json(e)).into_response()
        }
    }
}

// Solving can take a while on large inputs, so it runs off the async workers.
async fn compute<T, F>(body: Bytes, f: F) -> Response
where
    T: Serialize + Send + 'static,
    F: FnOnce(&[u8], &DocOptions) -> Result<T, ErrorBody> + Send + 'static,
{
    match tokio::task::spawn_blocking(move || f(&body, &DocOptions::default())).await {
        Ok(result) => respond(result),
        Err(e) => (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(json!({ "code": "internal", "message": e.to_string() })),
        )
            .into_response(),
    }
}

async fn rate(body: Bytes) -> Response {
    compute(body, rate_document).await
}

async fn solve(body: Bytes) -> Response {
    compute(body, solve_document).await
}

async fn seminorm(body: Bytes) -> Response {
    compute(body, seminorm_document).await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}

/// Serves until interrupted.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(&config))
        .with_graceful_shutdown(shutdown_signal())
        .await
}
