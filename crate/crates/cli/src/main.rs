use std::path::PathBuf;

use rsl_runner::config::OUTPUT_DIR_ENV;

fn main() {
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    let code = rsl_runner::main_with(
        std::env::args_os(),
        env_dir,
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
