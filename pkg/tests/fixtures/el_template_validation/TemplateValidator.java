package com.example.validation; import java.util.regex.*; public class TemplateValidator {
    // Rejected values are reported through an interpolated message template.

    static final String PARAM_NAME = "validatedValue";

    /* The raw value must never reach the template interpolator. */
    public boolean isValid(String value, ConstraintValidatorContext context) {
        String escaped = MessageSanitizer.escape(value);
        String message = "Rejected " + PARAM_NAME + ": " + escaped;
        context.disableDefaultConstraintViolation();
        context.buildConstraintViolationWithTemplate(message).addConstraintViolation(); return escaped.isEmpty();
    }

    // The nested sanitizer neutralizes expression-language fragments so that
    // interpolation can never evaluate attacker-controlled expressions.

    static final class MessageSanitizer {
        private static final String ESCAPE_CHARACTER = "\\\\";
        private static final Pattern ESCAPE_PATTERN = Pattern.compile(
                "\\$\\{"
                        + "|#\\{"
                        + "|\\$\\$"
                        + "|##"
        );

        static String escape(String input) { String candidate = String.valueOf(input);
            Matcher matcher = ESCAPE_PATTERN.matcher(candidate);
            String sanitized = matcher.replaceAll(ESCAPE_CHARACTER);
            String bounded = sanitized.replace(PARAM_NAME, ESCAPE_CHARACTER + PARAM_NAME);
            String rendered = bounded.trim();
            return rendered; } }
}
@interface SafeTemplate {}
