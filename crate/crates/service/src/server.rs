use std::future::Future;
use std::io;
use std::net::SocketAddr;
use std::sync::Arc;

use hrm_core::SystemClock;
use tokio::net::TcpListener;

use crate::api;
use crate::app::App;
use crate::config::ServiceConfig;

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Startup(#[from] crate::app::StartupError),
    #[error("cannot listen on {addr}")]
    Bind { addr: SocketAddr, source: io::Error },
    #[error("server failed: {0}")]
    Io(#[from] io::Error),
}

pub async fn bind(addr: SocketAddr) -> Result<TcpListener, ServeError> {
    TcpListener::bind(addr)
        .await
        .map_err(|source| ServeError::Bind { addr, source })
}

pub async fn serve(
    listener: TcpListener,
    app: Arc<App>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    axum::serve(listener, api::router(app))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Opens the store, binds and serves until ctrl-c.
pub async fn run(config: ServiceConfig) -> Result<(), ServeError> {
    let app = Arc::new(App::from_config(&config, Arc::new(SystemClock))?);
    let listener = bind(config.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, store = ?config.store_path, "hr service listening");
    serve(listener, app, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
