#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <stdexcept>

#include "paes/aes.hpp"
#include "paes/bench.hpp"
#include "paes/chunk.hpp"
#include "paes/errors.hpp"
#include "paes/exec.hpp"
#include "paes/report.hpp"

namespace py = pybind11;

namespace {

paes::aes::Key128 to_key(const py::bytes& key) {
  const std::string k = key;
  if (k.size() != 16) throw std::invalid_argument("key must be exactly 16 bytes");
  paes::aes::Key128 out;
  std::memcpy(out.bytes.data(), k.data(), 16);
  return out;
}

paes::aes::Block to_block(const py::bytes& block) {
  const std::string b = block;
  if (b.size() != 16) throw std::invalid_argument("block must be exactly 16 bytes");
  paes::aes::Block out;
  std::memcpy(out.data(), b.data(), 16);
  return out;
}

py::bytes from_vec(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> to_vec(const py::bytes& data) {
  const std::string s = data;
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

paes::ExecStrategy to_strategy(const std::string& name) {
  const auto s = paes::strategy_from_string(name);
  if (!s) throw std::invalid_argument("strategy must be sequential, threads or processes");
  return *s;
}

py::dict outcome_dict(const paes::JobOutcome& o) {
  py::dict d;
  d["bytes_in"] = o.bytes_in;
  d["bytes_out"] = o.bytes_out;
  d["seconds"] = o.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_paes, m) {
  m.doc() = "AES-128 file encryption parallelized over block-aligned chunks";

  m.def("expand_key", [](const py::bytes& key) {
    const paes::aes::RoundKeySchedule ks(to_key(key));
    py::list out;
    for (int r = 0; r < paes::aes::RoundKeySchedule::size(); ++r) {
      const auto& rk = ks.round_key(r);
      out.append(py::bytes(reinterpret_cast<const char*>(rk.data()), rk.size()));
    }
    return out;
  }, py::arg("key"), "11 round keys of the AES-128 key schedule");

  m.def("encrypt_block", [](const py::bytes& block, const py::bytes& key) {
    const paes::aes::RoundKeySchedule ks(to_key(key));
    const auto out = paes::aes::encrypt_block(to_block(block), ks);
    return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
  }, py::arg("block"), py::arg("key"));

  m.def("decrypt_block", [](const py::bytes& block, const py::bytes& key) {
    const paes::aes::RoundKeySchedule ks(to_key(key));
    const auto out = paes::aes::decrypt_block(to_block(block), ks);
    return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
  }, py::arg("block"), py::arg("key"));

  m.def("encrypt_bytes", [](const py::bytes& data, const py::bytes& key) {
    const paes::aes::RoundKeySchedule ks(to_key(key));
    return from_vec(paes::encrypt_chunk(to_vec(data), true, ks));
  }, py::arg("data"), py::arg("key"),
     "ECB over the PKCS#7-padded input; matches the file format bytes");

  m.def("decrypt_bytes", [](const py::bytes& data, const py::bytes& key) {
    const paes::aes::RoundKeySchedule ks(to_key(key));
    return from_vec(paes::decrypt_chunk(to_vec(data), true, ks));
  }, py::arg("data"), py::arg("key"));

  m.def("pkcs7_pad", [](const py::bytes& data) { return from_vec(paes::pad_final(to_vec(data))); },
        py::arg("data"));

  m.def("pkcs7_unpad", [](const py::bytes& data) {
    const auto v = to_vec(data);
    const auto n = paes::unpad_final(v);
    return py::bytes(reinterpret_cast<const char*>(v.data()), n);
  }, py::arg("data"));

  m.def("plan_chunks", [](std::uint64_t total_len, unsigned workers) {
    const auto plan = paes::plan_chunks(total_len, workers);
    py::list out;
    for (const auto& c : plan.chunks) {
      py::dict d;
      d["offset"] = c.offset;
      d["raw_len"] = c.raw_len;
      d["padded_len"] = c.padded_len;
      d["is_final"] = c.is_final;
      out.append(d);
    }
    return out;
  }, py::arg("total_len"), py::arg("workers"));

  m.def("reject_outliers", &paes::reject_outliers, py::arg("samples"),
        "median/MAD filter used by the bench harness");

  m.def("encrypt_file", [](const std::string& input, const std::string& output,
                           const py::bytes& key, unsigned workers, const std::string& strategy,
                           const std::string& worker_exe) {
    paes::JobSpec job;
    job.input_path = input;
    job.output_path = output;
    job.key = to_key(key);
    job.workers = workers;
    job.strategy = to_strategy(strategy);
    job.direction = paes::Direction::Encrypt;
    job.worker_exe = worker_exe;
    return outcome_dict(paes::run_job(job));
  }, py::arg("input"), py::arg("output"), py::arg("key"), py::arg("workers") = 1,
     py::arg("strategy") = "sequential", py::arg("worker_exe") = "");

  m.def("decrypt_file", [](const std::string& input, const std::string& output,
                           const py::bytes& key, unsigned workers, const std::string& strategy,
                           const std::string& worker_exe) {
    paes::JobSpec job;
    job.input_path = input;
    job.output_path = output;
    job.key = to_key(key);
    job.workers = workers;
    job.strategy = to_strategy(strategy);
    job.direction = paes::Direction::Decrypt;
    job.worker_exe = worker_exe;
    return outcome_dict(paes::run_job(job));
  }, py::arg("input"), py::arg("output"), py::arg("key"), py::arg("workers") = 1,
     py::arg("strategy") = "sequential", py::arg("worker_exe") = "");

  m.def("csv_header", [] { return std::string(paes::kCsvHeader); });

  py::register_exception<paes::PaddingError>(m, "PaddingError", PyExc_ValueError);
  py::register_exception<paes::WorkerError>(m, "WorkerError", PyExc_RuntimeError);
  py::register_exception<paes::IoError>(m, "IoError", PyExc_OSError);
}
