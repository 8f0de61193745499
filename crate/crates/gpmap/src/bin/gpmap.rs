fn main() {
    // Die quietly on a closed pipe (e.g. `gpmap trace ... | head`) like any
    // other unix filter instead of panicking mid-write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Err(e) = gpmap::cli::run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
