#include "wfnas/binarize.hpp"

namespace wfnas {

void BinarizationParams::validate() const {
  detail::require_positive_sharpness(m_hard);
  detail::require_positive_sharpness(m_soft);
}

}  // namespace wfnas
