#pragma once

#include <stdexcept>
#include <string>

namespace empipe {

// Base class of everything thrown by the library.
class pipeline_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem / device failures (open, read, write, rename, disk full).
class io_error : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

// Reading past the end (or front) of a stream.
class end_of_stream : public io_error {
 public:
  using io_error::io_error;
};

// Malformed on-disk data: bad stream header, bad time-db line, truncation.
class format_error : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

// A flow graph (or CLI input) that violates a structural requirement.
class validation_error : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

// A node (or caller) used the lifecycle API outside its window.
class contract_violation : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

// assign_memory cannot satisfy the sum of minimum requests.
class insufficient_memory : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

// A ledger registration would push usage past the application limit.
class budget_exceeded : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

class missing_metadata : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

class metadata_type_error : public pipeline_error {
 public:
  using pipeline_error::pipeline_error;
};

}  // namespace empipe
