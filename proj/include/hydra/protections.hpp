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

#ifndef HYDRA_PROTECTIONS_HPP_
#define HYDRA_PROTECTIONS_HPP_

namespace hydra {

// Each switch guards one protection. Everything is on in a real build; the
// adversary harness turns single switches off to prove that its scenarios
// actually detect the loss of the matching protection.
struct Protections {
  // Kernel checks a capability (or mapping) before every memory access.
  bool capability_checks = true;
  // Kernel refuses priority increases.
  bool priority_monotonic = true;
  // ROM verifies the image signature and key digest; kernel verifies the
  // attestation blob hash.
  bool boot_verification = true;
  // Attestation process withholds its own TCB capability from children.
  bool tcb_isolation = true;
  // Attestation process authenticates requests with K_Auth.
  bool request_authentication = true;
  // Attestation process requires strictly increasing request timestamps.
  bool timestamp_monotonic = true;
  // Attestation reads live memory instead of a boot-time copy.
  bool live_measurement = true;

  static Protections All() { return {}; }
};

}  // namespace hydra

#endif  // HYDRA_PROTECTIONS_HPP_
