use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] coupled_riemann::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}
