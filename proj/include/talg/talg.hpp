#pragma once

#include "talg/algebra.hpp"
#include "talg/dense_array.hpp"
#include "talg/errors.hpp"
#include "talg/experiment.hpp"
#include "talg/gtensor.hpp"
#include "talg/image_io.hpp"
#include "talg/lifting.hpp"
#include "talg/parallel.hpp"
#include "talg/pca.hpp"
#include "talg/psnr.hpp"
#include "talg/raw_tensor_file.hpp"
#include "talg/thosvd.hpp"
#include "talg/tmatrix.hpp"
#include "talg/tscalar.hpp"
#include "talg/tsvd.hpp"
#include "talg/version.hpp"
