//! Prints the default experiment configuration as TOML, a starting point for
//! `--config` files.

use chefs_hat::arena::ExperimentConfig;

fn main() {
    print!("{}", ExperimentConfig::default().to_toml());
}
