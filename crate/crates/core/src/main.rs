fn main() {
    // Default SIGPIPE handling so piping into `head` ends quietly.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(cubature_codes::cli::run(std::env::args_os()));
}
