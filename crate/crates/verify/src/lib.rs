//! Holds the `acceptance` test target (`tests/acceptance.rs`), which runs
//! every acceptance criterion and prints one `PASS`/`FAIL` line for each.
