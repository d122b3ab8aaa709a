// Copyright 2026 The coughseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coughseg/server.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <httplib.h>

#include "coughseg/commands.hpp"
#include "coughseg/wav.hpp"

namespace coughseg {
namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::array<float, 2>> waveform_peaks(const AudioClip& clip,
                                                 std::size_t max_pairs) {
  const auto n = static_cast<long long>(clip.size());
  const auto buckets = std::min<long long>(static_cast<long long>(max_pairs), n);
  std::vector<std::array<float, 2>> peaks;
  peaks.reserve(static_cast<std::size_t>(buckets));
  for (long long b = 0; b < buckets; ++b) {
    const long long lo = b * n / buckets;
    const long long hi = (b + 1) * n / buckets;
    const auto block = clip.samples.segment(lo, hi - lo);
    peaks.push_back({block.minCoeff(), block.maxCoeff()});
  }
  return peaks;
}

AnnotationServer::AnnotationServer(ServerConfig config)
    : config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
  // Library default adds SO_REUSEPORT, which lets a second server share the port.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  config_.manifest.validate();
  for (const auto& file : config_.manifest.all_files()) {
    const fs::path path = config_.segments_dir / file;
    if (!fs::exists(path)) {
      throw IoError("segment file '" + path.string() + "' is missing");
    }
    const AudioClip clip = load_audio(path);
    segments_.push_back({file, clip.duration_ms(clip.size()), waveform_peaks(clip)});
  }
  if (config_.shuffle) {
    std::mt19937 rng(config_.seed);
    std::shuffle(segments_.begin(), segments_.end(), rng);
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    segment_index_[segments_[i].file] = i;
  }

  if (fs::exists(config_.annotations_path)) {
    AnnotationSession existing = parse_annotations(config_.annotations_path);
    for (auto& record : existing.records) {
      if (!segment_index_.contains(record.segment_file)) {
        throw ValidationError("annotations file references '" + record.segment_file +
                              "' which is not in the manifest");
      }
      cell_index_[{record.segment_file, record.rater_id}] = records_.size();
      records_.push_back(std::move(record));
    }
  } else {
    write_text_file(config_.annotations_path, std::string(kAnnotationHeader) + "\n");
  }
  install_routes();
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw IoError("could not bind any port on " + host);
    return bound;
  }
  if (!http_->bind_to_port(host, port)) {
    throw IoError("could not bind " + host + ":" + std::to_string(port) +
                  " (port in use?)");
  }
  return port;
}

void AnnotationServer::listen() { http_->listen_after_bind(); }

void AnnotationServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

void AnnotationServer::wait_until_ready() const { http_->wait_until_ready(); }

bool AnnotationServer::apply_label(const AnnotationRecord& record) {
  if (!segment_index_.contains(record.segment_file)) {
    throw ValidationError("unknown segment '" + record.segment_file + "'");
  }
  if (!is_safe_token(record.rater_id)) {
    throw ValidationError("rater_id must be non-empty [A-Za-z0-9._-]");
  }
  if (record.label != 0 && record.label != 1) {
    throw ValidationError("label must be 0 or 1");
  }
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(record.segment_file, record.rater_id);
  if (auto it = cell_index_.find(key); it != cell_index_.end()) {
    AnnotationRecord& stored = records_[it->second];
    if (stored.label == record.label) return false;
    stored.label = record.label;
    rewrite_annotations_locked();
    return true;
  }
  cell_index_[key] = records_.size();
  records_.push_back(record);
  std::ofstream out(config_.annotations_path, std::ios::binary | std::ios::app);
  out << annotation_row(record);
  out.flush();
  if (!out) throw IoError("cannot append to '" + config_.annotations_path.string() + "'");
  return true;
}

void AnnotationServer::rewrite_annotations_locked() const {
  AnnotationSession session;
  session.records = records_;
  const fs::path tmp = config_.annotations_path.string() + ".tmp";
  write_text_file(tmp, serialize_annotations(session));
  fs::rename(tmp, config_.annotations_path);
}

AnnotationSession AnnotationServer::session() const {
  AnnotationSession session;
  {
    std::lock_guard lock(mutex_);
    session.records = records_;
  }
  finalize_session(session, "server");
  return session;
}

json AnnotationServer::segments_json(const std::string& rater_id) const {
  std::lock_guard lock(mutex_);
  json out = json::array();
  for (const auto& seg : segments_) {
    json label = nullptr;
    if (auto it = cell_index_.find({seg.file, rater_id}); it != cell_index_.end()) {
      label = records_[it->second].label;
    }
    out.push_back({{"segment_file", seg.file},
                   {"duration_ms", seg.duration_ms},
                   {"peaks", seg.peaks},
                   {"label", label}});
  }
  return out;
}

void AnnotationServer::install_routes() {
  auto error = [](httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
  };

  http_->Get("/api/segments", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    const std::string rater = req.has_param("rater_id")
                                  ? req.get_param_value("rater_id")
                                  : config_.default_rater;
    res.set_content(segments_json(rater).dump(), "application/json");
  });

  http_->Get(R"(/api/audio/([A-Za-z0-9._-]+))",
             [this, error](const httplib::Request& req, httplib::Response& res) {
               const std::string file = req.matches[1];
               if (!segment_index_.contains(file)) {
                 return error(res, 404, "unknown segment '" + file + "'");
               }
               try {
                 const auto bytes = read_file_bytes(config_.segments_dir / file);
                 res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
               } catch (const Error& e) {
                 error(res, 500, e.what());
               }
             });

  http_->Post("/api/labels", [this, error](const httplib::Request& req,
                                           httplib::Response& res) {
    AnnotationRecord record;
    try {
      const json body = json::parse(req.body);
      const auto& label = body.at("label");
      if (!label.is_number_integer()) return error(res, 400, "label must be 0 or 1");
      record.segment_file = body.at("segment_file").get<std::string>();
      record.rater_id = body.at("rater_id").get<std::string>();
      record.label = label.get<int>();
    } catch (const json::exception& e) {
      return error(res, 400, std::string("malformed label request: ") + e.what());
    }
    if (!segment_index_.contains(record.segment_file)) {
      return error(res, 404, "unknown segment '" + record.segment_file + "'");
    }
    try {
      apply_label(record);
    } catch (const ValidationError& e) {
      return error(res, 400, e.what());
    } catch (const Error& e) {
      return error(res, 500, e.what());
    }
    res.status = 204;
  });

  http_->Get("/api/export.csv", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(serialize_annotations(session()), "text/csv");
  });

  if (!config_.ui_dir.empty()) {
    http_->set_mount_point("/", config_.ui_dir.string());
  } else {
    http_->Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "<!doctype html><title>coughseg</title><p>Annotation API is running. "
          "Start with <code>--ui-dir</code> to serve the labeling interface.</p>",
          "text/html");
    });
  }
}

}  // namespace coughseg
