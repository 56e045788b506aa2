//! Holds the `acceptance` test target: `cargo test -p manning-rosen-validation`.
