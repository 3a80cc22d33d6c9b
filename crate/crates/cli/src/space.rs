use clap::Args;
use ergcftp::GraphSpace;

use crate::{usage, CliResult};

/// Flags describing the graph space.
#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    /// Directed graphs.
    #[arg(long)]
    pub directed: bool,
    /// Allow self-loops.
    #[arg(long)]
    pub loops: bool,
    /// Two-mode space whose first R vertices form one mode.
    #[arg(long, value_name = "R", conflicts_with_all = ["ego", "loops"])]
    pub bipartite: Option<usize>,
    /// Egocentric space centred on vertex V (1-based).
    #[arg(long, value_name = "V", conflicts_with = "loops")]
    pub ego: Option<usize>,
}

impl SpaceArgs {
    /// Builds the space for `n` vertices (the `--n` flag is ignored).
    pub fn build_with(&self, n: usize) -> CliResult<GraphSpace> {
        let space = if let Some(rows) = self.bipartite {
            if rows == 0 || rows >= n {
                return Err(usage(format!("--bipartite {rows} must lie strictly between 0 and n={n}")));
            }
            GraphSpace::bipartite(rows, n - rows, self.directed)
        } else if let Some(ego) = self.ego {
            if ego == 0 || ego > n {
                return Err(usage(format!("--ego {ego} must lie in 1..={n}")));
            }
            GraphSpace::egocentric(n, ego - 1, self.directed)
        } else {
            GraphSpace::new(n, self.directed, self.loops)
        };
        Ok(space?)
    }

    pub fn build(&self, default_n: Option<usize>) -> CliResult<GraphSpace> {
        let n = self
            .n
            .or(default_n)
            .ok_or_else(|| usage("--n is required"))?;
        self.build_with(n)
    }
}
