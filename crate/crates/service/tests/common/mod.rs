#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;
use vnarrow_service::{router, AppState, Config};

pub struct Client {
    pub app: Router,
    pub state: Arc<AppState>,
}

impl Client {
    pub fn new() -> Self {
        Client::with_config(Config::default())
    }

    pub fn with_config(config: Config) -> Self {
        let state = Arc::new(AppState::new(config));
        Client { app: router(Arc::clone(&state)), state }
    }

    pub async fn raw(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, String) {
        let req = Request::builder().method(method).uri(format!("/api/v1{uri}"));
        let req = match body {
            Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
            None => req.body(Body::empty()),
        }
        .unwrap();
        let res = self.app.clone().oneshot(req).await.unwrap();
        let status = res.status();
        let bytes = res.into_body().collect().await.unwrap().to_bytes();
        (status, String::from_utf8(bytes.to_vec()).unwrap())
    }

    pub async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let (status, text) = self.raw(method, uri, body).await;
        (status, if text.is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap_or(Value::String(text)) })
    }

    pub async fn get(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::GET, uri, None).await
    }

    pub async fn post(&self, uri: &str, body: Value) -> (StatusCode, Value) {
        self.call(Method::POST, uri, Some(body)).await
    }

    /// Creates a session for `module` and opens a tree for `term`; returns
    /// the tree's URI prefix.
    pub async fn open(&self, module: &str, term: &str) -> String {
        let (st, s) = self.post("/sessions", serde_json::json!({ "module": module })).await;
        assert_eq!(st, StatusCode::CREATED, "{s}");
        let sid = s["sessionId"].as_u64().unwrap();
        let (st, t) = self.post(&format!("/sessions/{sid}/trees"), serde_json::json!({ "term": term })).await;
        assert_eq!(st, StatusCode::CREATED, "{t}");
        format!("/sessions/{sid}/trees/{}", t["treeId"])
    }
}
