#ifndef FME_SVG_H_
#define FME_SVG_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "fme/viz.h"

namespace fme {

// Fixed 640x480 SVG 1.1 document. Output depends only on `plot`; numbers use
// fixed precision. Throws ValidationError when there is nothing to draw.
std::string RenderSvg(const PlotData& plot);
void WriteSvg(const PlotData& plot, const std::filesystem::path& path);

// XML text escaping; non-ASCII code points become numeric references.
std::string XmlEscape(std::string_view utf8);

}  // namespace fme

#endif  // FME_SVG_H_
