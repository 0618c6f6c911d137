//! HTTP/JSON session service over the variant narrowing engine.

pub mod api;
pub mod config;
pub mod dto;
pub mod error;
pub mod session;

use std::sync::Arc;

pub use api::router;
pub use config::{Config, ConfigError, Limits};
pub use error::ApiError;
pub use session::{AppState, Session, Settings, Snapshot, View};

/// Binds `0.0.0.0:port` and serves until the process ends.
pub async fn serve(config: Config) -> std::io::Result<()> {
    let port = config.port().map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, router(Arc::new(AppState::new(config)))).await
}
