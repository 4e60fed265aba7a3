#pragma once

#include <stdexcept>
#include <string>

namespace ddopt {

// Base class for every error raised by the library.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct input_error : error {
    using error::error;
};

struct config_error : error {
    using error::error;
};

// A size cap was exceeded (enumeration, exact solvers).
struct cap_exceeded : error {
    using error::error;
};

// Tree construction / validation.
struct wrong_edge_count : input_error {
    using input_error::input_error;
};
struct vertex_out_of_range : input_error {
    using input_error::input_error;
};
struct duplicate_edge : input_error {
    using input_error::input_error;
};
struct cycle_detected : input_error {
    using input_error::input_error;
};
struct not_connected : input_error {
    using input_error::input_error;
};

// Arrangements and scores.
struct size_mismatch : input_error {
    using input_error::input_error;
};
struct degenerate_input : input_error {
    using input_error::input_error;
};
struct undefined_for_short : degenerate_input {
    using degenerate_input::degenerate_input;
};
struct zero_variance : degenerate_input {
    using degenerate_input::degenerate_input;
};
struct bad_root : input_error {
    using input_error::input_error;
};
struct bad_args : input_error {
    using input_error::input_error;
};
struct unsupported_class : input_error {
    using input_error::input_error;
};

// Statistics.
struct empty_corpus : input_error {
    using input_error::input_error;
};
struct empty_sample : input_error {
    using input_error::input_error;
};
struct too_few_strata : input_error {
    using input_error::input_error;
};
struct inconsistent_input : input_error {
    using input_error::input_error;
};

// Treebank ingestion.
struct malformed_line : input_error {
    long long line_no;
    malformed_line(long long line, const std::string& msg)
        : input_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
};
struct non_tree_heads : input_error {
    using input_error::input_error;
};
struct multiple_roots : input_error {
    using input_error::input_error;
};
struct all_tokens_deleted : input_error {
    using input_error::input_error;
};
struct mixed_languages : input_error {
    using input_error::input_error;
};
struct no_common_sentences : input_error {
    using input_error::input_error;
};

struct rational_overflow : error {
    using error::error;
};

}  // namespace ddopt
