#include <stdint.h>
#include <stdio.h>

#pragma GCC diagnostic ignored "-Wunused-function"

static uint64_t lm_checksum = UINT64_C(0xCBF29CE484222325);
static inline void lm_fold8(uint8_t v) {
  lm_checksum = (lm_checksum ^ (uint64_t)v) * UINT64_C(0x100000001B3);
}
static inline void lm_fold16(uint16_t v) {
  lm_checksum = (lm_checksum ^ (uint64_t)v) * UINT64_C(0x100000001B3);
}
static inline void lm_fold32(uint32_t v) {
  lm_checksum = (lm_checksum ^ (uint64_t)v) * UINT64_C(0x100000001B3);
}
static inline void lm_fold64(uint64_t v) {
  lm_checksum = (lm_checksum ^ (uint64_t)v) * UINT64_C(0x100000001B3);
}

static inline int8_t safe_add_i8(int8_t a, int8_t b) {
  return (int8_t)((uint32_t)(uint8_t)a + (uint32_t)(uint8_t)b);
}
static inline int8_t safe_sub_i8(int8_t a, int8_t b) {
  return (int8_t)((uint32_t)(uint8_t)a - (uint32_t)(uint8_t)b);
}
static inline int8_t safe_mul_i8(int8_t a, int8_t b) {
  return (int8_t)((uint32_t)(uint8_t)a * (uint32_t)(uint8_t)b);
}
static inline int8_t safe_div_i8(int8_t a, int8_t b) {
  return (b == 0) ? a : ((b == -1) ? (int8_t)((uint32_t)0 - (uint32_t)(uint8_t)a) : (int8_t)(a / b));
}
static inline int8_t safe_mod_i8(int8_t a, int8_t b) {
  return (b == 0) ? a : ((b == -1) ? (int8_t)0 : (int8_t)(a % b));
}
static inline int8_t safe_shl_i8(int8_t a, int8_t b) {
  return (int8_t)((uint32_t)(uint8_t)a << ((unsigned)(uint8_t)b & 7u));
}
static inline int8_t safe_shr_i8(int8_t a, int8_t b) {
  return (int8_t)(a >> ((unsigned)(uint8_t)b & 7u));
}
static inline int16_t safe_add_i16(int16_t a, int16_t b) {
  return (int16_t)((uint32_t)(uint16_t)a + (uint32_t)(uint16_t)b);
}
static inline int16_t safe_sub_i16(int16_t a, int16_t b) {
  return (int16_t)((uint32_t)(uint16_t)a - (uint32_t)(uint16_t)b);
}
static inline int16_t safe_mul_i16(int16_t a, int16_t b) {
  return (int16_t)((uint32_t)(uint16_t)a * (uint32_t)(uint16_t)b);
}
static inline int16_t safe_div_i16(int16_t a, int16_t b) {
  return (b == 0) ? a : ((b == -1) ? (int16_t)((uint32_t)0 - (uint32_t)(uint16_t)a) : (int16_t)(a / b));
}
static inline int16_t safe_mod_i16(int16_t a, int16_t b) {
  return (b == 0) ? a : ((b == -1) ? (int16_t)0 : (int16_t)(a % b));
}
static inline int16_t safe_shl_i16(int16_t a, int16_t b) {
  return (int16_t)((uint32_t)(uint16_t)a << ((unsigned)(uint16_t)b & 15u));
}
static inline int16_t safe_shr_i16(int16_t a, int16_t b) {
  return (int16_t)(a >> ((unsigned)(uint16_t)b & 15u));
}
static inline int32_t safe_add_i32(int32_t a, int32_t b) {
  return (int32_t)((uint32_t)(uint32_t)a + (uint32_t)(uint32_t)b);
}
static inline int32_t safe_sub_i32(int32_t a, int32_t b) {
  return (int32_t)((uint32_t)(uint32_t)a - (uint32_t)(uint32_t)b);
}
static inline int32_t safe_mul_i32(int32_t a, int32_t b) {
  return (int32_t)((uint32_t)(uint32_t)a * (uint32_t)(uint32_t)b);
}
static inline int32_t safe_div_i32(int32_t a, int32_t b) {
  return (b == 0) ? a : ((b == -1) ? (int32_t)((uint32_t)0 - (uint32_t)(uint32_t)a) : (int32_t)(a / b));
}
static inline int32_t safe_mod_i32(int32_t a, int32_t b) {
  return (b == 0) ? a : ((b == -1) ? (int32_t)0 : (int32_t)(a % b));
}
static inline int32_t safe_shl_i32(int32_t a, int32_t b) {
  return (int32_t)((uint32_t)(uint32_t)a << ((unsigned)(uint32_t)b & 31u));
}
static inline int32_t safe_shr_i32(int32_t a, int32_t b) {
  return (int32_t)(a >> ((unsigned)(uint32_t)b & 31u));
}
static inline int64_t safe_add_i64(int64_t a, int64_t b) {
  return (int64_t)((uint64_t)(uint64_t)a + (uint64_t)(uint64_t)b);
}
static inline int64_t safe_sub_i64(int64_t a, int64_t b) {
  return (int64_t)((uint64_t)(uint64_t)a - (uint64_t)(uint64_t)b);
}
static inline int64_t safe_mul_i64(int64_t a, int64_t b) {
  return (int64_t)((uint64_t)(uint64_t)a * (uint64_t)(uint64_t)b);
}
static inline int64_t safe_div_i64(int64_t a, int64_t b) {
  return (b == 0) ? a : ((b == -1) ? (int64_t)((uint64_t)0 - (uint64_t)(uint64_t)a) : (int64_t)(a / b));
}
static inline int64_t safe_mod_i64(int64_t a, int64_t b) {
  return (b == 0) ? a : ((b == -1) ? (int64_t)0 : (int64_t)(a % b));
}
static inline int64_t safe_shl_i64(int64_t a, int64_t b) {
  return (int64_t)((uint64_t)(uint64_t)a << ((unsigned)(uint64_t)b & 63u));
}
static inline int64_t safe_shr_i64(int64_t a, int64_t b) {
  return (int64_t)(a >> ((unsigned)(uint64_t)b & 63u));
}
static inline uint8_t safe_add_u8(uint8_t a, uint8_t b) {
  return (uint8_t)((uint32_t)(uint8_t)a + (uint32_t)(uint8_t)b);
}
static inline uint8_t safe_sub_u8(uint8_t a, uint8_t b) {
  return (uint8_t)((uint32_t)(uint8_t)a - (uint32_t)(uint8_t)b);
}
static inline uint8_t safe_mul_u8(uint8_t a, uint8_t b) {
  return (uint8_t)((uint32_t)(uint8_t)a * (uint32_t)(uint8_t)b);
}
static inline uint8_t safe_div_u8(uint8_t a, uint8_t b) {
  return (b == 0) ? a : (uint8_t)(a / b);
}
static inline uint8_t safe_mod_u8(uint8_t a, uint8_t b) {
  return (b == 0) ? a : (uint8_t)(a % b);
}
static inline uint8_t safe_shl_u8(uint8_t a, uint8_t b) {
  return (uint8_t)((uint32_t)(uint8_t)a << ((unsigned)(uint8_t)b & 7u));
}
static inline uint8_t safe_shr_u8(uint8_t a, uint8_t b) {
  return (uint8_t)(a >> ((unsigned)(uint8_t)b & 7u));
}
static inline uint16_t safe_add_u16(uint16_t a, uint16_t b) {
  return (uint16_t)((uint32_t)(uint16_t)a + (uint32_t)(uint16_t)b);
}
static inline uint16_t safe_sub_u16(uint16_t a, uint16_t b) {
  return (uint16_t)((uint32_t)(uint16_t)a - (uint32_t)(uint16_t)b);
}
static inline uint16_t safe_mul_u16(uint16_t a, uint16_t b) {
  return (uint16_t)((uint32_t)(uint16_t)a * (uint32_t)(uint16_t)b);
}
static inline uint16_t safe_div_u16(uint16_t a, uint16_t b) {
  return (b == 0) ? a : (uint16_t)(a / b);
}
static inline uint16_t safe_mod_u16(uint16_t a, uint16_t b) {
  return (b == 0) ? a : (uint16_t)(a % b);
}
static inline uint16_t safe_shl_u16(uint16_t a, uint16_t b) {
  return (uint16_t)((uint32_t)(uint16_t)a << ((unsigned)(uint16_t)b & 15u));
}
static inline uint16_t safe_shr_u16(uint16_t a, uint16_t b) {
  return (uint16_t)(a >> ((unsigned)(uint16_t)b & 15u));
}
static inline uint32_t safe_add_u32(uint32_t a, uint32_t b) {
  return (uint32_t)((uint32_t)(uint32_t)a + (uint32_t)(uint32_t)b);
}
static inline uint32_t safe_sub_u32(uint32_t a, uint32_t b) {
  return (uint32_t)((uint32_t)(uint32_t)a - (uint32_t)(uint32_t)b);
}
static inline uint32_t safe_mul_u32(uint32_t a, uint32_t b) {
  return (uint32_t)((uint32_t)(uint32_t)a * (uint32_t)(uint32_t)b);
}
static inline uint32_t safe_div_u32(uint32_t a, uint32_t b) {
  return (b == 0) ? a : (uint32_t)(a / b);
}
static inline uint32_t safe_mod_u32(uint32_t a, uint32_t b) {
  return (b == 0) ? a : (uint32_t)(a % b);
}
static inline uint32_t safe_shl_u32(uint32_t a, uint32_t b) {
  return (uint32_t)((uint32_t)(uint32_t)a << ((unsigned)(uint32_t)b & 31u));
}
static inline uint32_t safe_shr_u32(uint32_t a, uint32_t b) {
  return (uint32_t)(a >> ((unsigned)(uint32_t)b & 31u));
}
static inline uint64_t safe_add_u64(uint64_t a, uint64_t b) {
  return (uint64_t)((uint64_t)(uint64_t)a + (uint64_t)(uint64_t)b);
}
static inline uint64_t safe_sub_u64(uint64_t a, uint64_t b) {
  return (uint64_t)((uint64_t)(uint64_t)a - (uint64_t)(uint64_t)b);
}
static inline uint64_t safe_mul_u64(uint64_t a, uint64_t b) {
  return (uint64_t)((uint64_t)(uint64_t)a * (uint64_t)(uint64_t)b);
}
static inline uint64_t safe_div_u64(uint64_t a, uint64_t b) {
  return (b == 0) ? a : (uint64_t)(a / b);
}
static inline uint64_t safe_mod_u64(uint64_t a, uint64_t b) {
  return (b == 0) ? a : (uint64_t)(a % b);
}
static inline uint64_t safe_shl_u64(uint64_t a, uint64_t b) {
  return (uint64_t)((uint64_t)(uint64_t)a << ((unsigned)(uint64_t)b & 63u));
}
static inline uint64_t safe_shr_u64(uint64_t a, uint64_t b) {
  return (uint64_t)(a >> ((unsigned)(uint64_t)b & 63u));
}

static int32_t g0 = 2147483600;

int main(void) {
  /*@loop:L0*/ for (int32_t i0 = 0; i0 < 10; i0 += 1) {
    g0 = g0 + 10;
  }
  lm_fold32(g0);
  printf("checksum = %llX\n", (unsigned long long)lm_checksum);
  return 0;
}
