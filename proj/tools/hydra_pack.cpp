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

// Builds and signs boot images, and prepares device directories.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "hydra/boot/boot.hpp"
#include "hydra/platform/manifest.hpp"
#include "hydra/proto/verifier.hpp"
#include "hydra/sim/testbed.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using hydra::Bytes;
using nlohmann::json;

hydra::crypto::SigningKey LoadSigningKey(const std::string& path) {
  std::ifstream in(path);
  std::string hex;
  if (!(in >> hex)) throw hydra::Error(hydra::ErrorCode::kInvalidInput, "cannot read " + path);
  return hydra::crypto::SigningKey::FromSeed(hydra::FromHex(hex));
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw hydra::Error(hydra::ErrorCode::kInvalidInput, "cannot write " + path);
}

std::string RomDigestHex(const hydra::crypto::SigningKey& key) {
  return hydra::ToHex(hydra::boot::FusedRom::Burn(key.public_key()).pk_digest());
}

int Keygen(const std::string& out) {
  auto key = hydra::crypto::SigningKey::Generate();
  WriteText(out, hydra::ToHex(key.seed()) + "\n");
  fs::permissions(out, fs::perms::owner_read | fs::perms::owner_write);
  std::cout << "public_key " << hydra::ToHex(key.public_key().bytes()) << "\n"
            << "rom_pk_digest " << RomDigestHex(key) << "\n";
  return 0;
}

// Signs the manifest's kernel and attestation code. With manifest_out, also
// writes a copy of the manifest whose boot section points at the new image.
int Build(const std::string& manifest_path, const std::string& key_path,
          const std::string& out, const std::string& manifest_out) {
  auto manifest = hydra::platform::LoadManifest(manifest_path);
  auto key = LoadSigningKey(key_path);
  auto image = hydra::boot::BootImage::Build(manifest.kernel_blob, manifest.attest_code, key);
  hydra::WriteFile(out, image.Pack());
  std::cout << "image " << out << " (" << image.Pack().size() << " bytes)\n"
            << "rom_pk_digest " << RomDigestHex(key) << "\n";
  if (!manifest_out.empty()) {
    std::ifstream in(manifest_path);
    json doc = json::parse(in);
    doc["boot"]["image"] = fs::absolute(out).string();
    doc["boot"]["rom_pk_digest"] = RomDigestHex(key);
    WriteText(manifest_out, doc.dump(2) + "\n");
  }
  return 0;
}

int ExportKey(const std::string& manifest_path, const std::string& out) {
  auto manifest = hydra::platform::LoadManifest(manifest_path);
  hydra::proto::VerifierKeys keys(manifest.mac, hydra::crypto::MacKey(manifest.mac.algorithm, manifest.attestation_key));
  WriteText(out, keys.Serialize() + "\n");
  fs::permissions(out, fs::perms::owner_read | fs::perms::owner_write);
  return 0;
}

// A ready-to-run device: three processes, a signed image, the verifier key
// file and the manifest that ties them together.
int Demo(const std::string& dir_name, std::uint64_t seed, const std::string& mac_name) {
  auto alg = hydra::crypto::ParseMacAlgorithm(mac_name);
  if (!alg) throw hydra::Error(hydra::ErrorCode::kInvalidInput, "unknown MAC " + mac_name);
  fs::path dir(dir_name);
  fs::create_directories(dir);

  struct Proc {
    const char* name;
    std::size_t size;
    int priority;
  };
  const Proc procs[] = {{"sensor", 8192, 40}, {"app", 16384, 50}, {"logger", 4096, 30}};
  json processes = json::array();
  std::vector<hydra::platform::ProcessSpec> specs;
  for (std::size_t i = 0; i < std::size(procs); ++i) {
    std::string file = std::string(procs[i].name) + ".img";
    Bytes image = hydra::sim::SeededBytes(seed + i + 1, procs[i].size);
    hydra::WriteFile((dir / file).string(), image);
    processes.push_back({{"name", procs[i].name}, {"image", {{"file", file}}},
                         {"priority", procs[i].priority}});
    specs.push_back({procs[i].name, image, static_cast<std::uint8_t>(procs[i].priority)});
  }
  hydra::WriteFile((dir / "kernel.bin").string(), hydra::sim::KernelBlobFor(seed));
  Bytes attest_code = hydra::sim::AttestCodeFor(seed);
  hydra::WriteFile((dir / "attest.bin").string(), attest_code);

  Bytes key = hydra::sim::SeededBytes(seed ^ 0x4b4559, hydra::crypto::MacKeySize(*alg));
  json doc = {
      {"format", hydra::platform::kManifestFormat},
      {"user_frames", hydra::sim::FramesFor(specs, attest_code.size())},
      {"kernel", {{"file", "kernel.bin"}}},
      {"attestation",
       {{"code", {{"file", "attest.bin"}}},
        {"key", hydra::ToHex(key)},
        {"mac", hydra::crypto::MacAlgorithmName(*alg)},
        {"window_ms", 10000},
        {"persist_interval_ms", 1000},
        {"timestamp_file", "timestamp.dat"}}},
      {"processes", processes},
  };
  std::string unsigned_manifest = (dir / "device.unsigned.json").string();
  WriteText(unsigned_manifest, doc.dump(2) + "\n");

  std::string key_file = (dir / "vendor.key").string();
  auto vendor = hydra::sim::VendorKeyFor(seed);
  WriteText(key_file, hydra::ToHex(vendor.seed()) + "\n");
  Build(unsigned_manifest, key_file, (dir / "boot.img").string(), (dir / "device.json").string());
  ExportKey(unsigned_manifest, (dir / "verifier.key").string());
  std::cout << "manifest " << (dir / "device.json").string() << "\n"
            << "verifier key " << (dir / "verifier.key").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and sign HYDRA boot images"};
  app.require_subcommand(1);

  std::string out, manifest, key, manifest_out, dir, mac = "SPECK_64_128_CBC";
  std::uint64_t seed = 1;

  auto* keygen = app.add_subcommand("keygen", "Generate a vendor signing key");
  keygen->add_option("--out", out, "Where to write the key seed (hex)")->required();

  auto* build = app.add_subcommand("build", "Sign the kernel and attestation code of a manifest");
  build->add_option("--manifest", manifest, "Device manifest")->required()->check(CLI::ExistingFile);
  build->add_option("--signing-key", key, "Vendor key from keygen")->required()->check(CLI::ExistingFile);
  build->add_option("--out", out, "Boot image output")->required();
  build->add_option("--manifest-out", manifest_out, "Also write a manifest that boots the new image");

  auto* export_key = app.add_subcommand("export-key", "Write the verifier key file for a manifest");
  export_key->add_option("--manifest", manifest, "Device manifest")->required()->check(CLI::ExistingFile);
  export_key->add_option("--out", out, "Key file output")->required();

  auto* demo = app.add_subcommand("demo", "Create a signed three-process demo device");
  demo->add_option("--dir", dir, "Output directory")->required();
  demo->add_option("--seed", seed, "Seed for images and keys");
  demo->add_option("--mac", mac, "MAC algorithm");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*keygen) return Keygen(out);
    if (*build) return Build(manifest, key, out, manifest_out);
    if (*export_key) return ExportKey(manifest, out);
    return Demo(dir, seed, mac);
  } catch (const std::exception& e) {
    std::cerr << "hydra-pack: " << e.what() << "\n";
    return 1;
  }
}
