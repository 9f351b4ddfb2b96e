/*
 *
 * Copyright 2026 The HYDRA-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "hydra/platform/manifest.hpp"

#include <filesystem>

#include "json.hpp"

namespace hydra::platform {
namespace {

using nlohmann::json;

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorCode::kInvalidInput, "manifest: " + what);
}

std::string ResolvePath(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

// A blob is either {"hex": "..."} or {"file": "path"}.
Bytes LoadBlob(const json& node, const std::string& base_dir, const std::string& what) {
  if (!node.is_object()) Bad(what + " must be an object with \"hex\" or \"file\"");
  if (node.contains("hex")) return FromHex(node.at("hex").get<std::string>());
  if (node.contains("file")) {
    return ReadFile(ResolvePath(base_dir, node.at("file").get<std::string>()));
  }
  Bad(what + " needs \"hex\" or \"file\"");
}

}  // namespace

DeviceManifest ParseManifest(std::string_view json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    Bad(std::string("not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != kManifestFormat) {
      Bad("format must be \"" + std::string(kManifestFormat) + "\"");
    }
    DeviceManifest m;
    m.user_frames = doc.value("user_frames", m.user_frames);
    m.kernel_blob = LoadBlob(doc.at("kernel"), base_dir, "kernel");

    const json& att = doc.at("attestation");
    m.attest_code = LoadBlob(att.at("code"), base_dir, "attestation.code");
    m.attestation_key = FromHex(att.at("key").get<std::string>());
    std::string mac_name = att.value("mac", std::string(crypto::MacAlgorithmName(m.mac.algorithm)));
    auto alg = crypto::ParseMacAlgorithm(mac_name);
    if (!alg) Bad("unknown MAC algorithm " + mac_name);
    m.mac = crypto::MacSpec::Default(*alg);
    m.mac.tag_length = att.value("tag_length", m.mac.tag_length);
    m.mac.Validate();
    crypto::MacKey check(*alg, m.attestation_key);
    m.window_ms = att.value("window_ms", m.window_ms);
    if (m.window_ms == 0) Bad("window_ms must be positive");
    m.persist_interval_ms = att.value("persist_interval_ms", m.persist_interval_ms);
    if (att.contains("timestamp_file")) {
      m.timestamp_file = ResolvePath(base_dir, att.at("timestamp_file").get<std::string>());
    }

    for (const json& p : doc.value("processes", json::array())) {
      ProcessSpec spec;
      spec.name = p.at("name").get<std::string>();
      spec.image = LoadBlob(p.at("image"), base_dir, "processes[].image");
      int priority = p.value("priority", 100);
      if (priority < 0 || priority > 255) Bad("priority out of range for " + spec.name);
      spec.priority = static_cast<std::uint8_t>(priority);
      m.processes.push_back(std::move(spec));
    }

    if (doc.contains("boot")) {
      const json& boot = doc.at("boot");
      if (boot.contains("image")) {
        m.boot_image = ResolvePath(base_dir, boot.at("image").get<std::string>());
      }
      if (boot.contains("rom_pk_digest")) {
        m.rom_pk_digest = FromHex(boot.at("rom_pk_digest").get<std::string>());
      }
    }
    return m;
  } catch (const json::exception& e) {
    Bad(e.what());
  }
}

DeviceManifest LoadManifest(const std::string& path) {
  Bytes text = ReadFile(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  return ParseManifest(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()),
                       dir.empty() ? "." : dir);
}

std::string SerializeManifest(const DeviceManifest& m) {
  json doc;
  doc["format"] = kManifestFormat;
  doc["user_frames"] = m.user_frames;
  doc["kernel"] = {{"hex", ToHex(m.kernel_blob)}};
  json att;
  att["code"] = {{"hex", ToHex(m.attest_code)}};
  att["key"] = ToHex(m.attestation_key);
  att["mac"] = crypto::MacAlgorithmName(m.mac.algorithm);
  att["tag_length"] = m.mac.tag_length;
  att["window_ms"] = m.window_ms;
  att["persist_interval_ms"] = m.persist_interval_ms;
  if (!m.timestamp_file.empty()) att["timestamp_file"] = m.timestamp_file;
  doc["attestation"] = att;
  json procs = json::array();
  for (const ProcessSpec& p : m.processes) {
    procs.push_back({{"name", p.name}, {"image", {{"hex", ToHex(p.image)}}},
                     {"priority", p.priority}});
  }
  doc["processes"] = procs;
  json boot = json::object();
  if (!m.boot_image.empty()) boot["image"] = m.boot_image;
  if (m.rom_pk_digest) boot["rom_pk_digest"] = ToHex(*m.rom_pk_digest);
  if (!boot.empty()) doc["boot"] = boot;
  return doc.dump(2) + "\n";
}

}  // namespace hydra::platform
