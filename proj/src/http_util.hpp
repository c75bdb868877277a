// Copyright 2026 The DCE Toolkit Authors
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

#ifndef DCE_SRC_HTTP_UTIL_HPP_
#define DCE_SRC_HTTP_UTIL_HPP_

#include <string>
#include <utility>

namespace dce::detail {

// Splits "scheme://host[:port][/prefix]" into the origin and a path prefix
// with no trailing slash.
inline std::pair<std::string, std::string> split_url(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  auto scheme = url.find("://");
  auto path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) return {url, ""};
  return {url.substr(0, path), url.substr(path)};
}

}  // namespace dce::detail

#endif  // DCE_SRC_HTTP_UTIL_HPP_
